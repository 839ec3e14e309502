#pragma once

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "robin/core.hpp"
#include "robin/io.hpp"
#include "robin/model_spectra.hpp"
#include "robin/sweep.hpp"

namespace robin {

// Every CLI run drops a manifest next to its outputs before any heavy work:
// what ran, with which resolved configuration, over which inputs (content
// hashes), and which files it intends to write.
struct RunManifest {
    std::string subcommand;
    nlohmann::json config;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, fnv1a64 hex
    std::uint64_t seed = 0;
    std::string version;
    std::vector<std::string> outputs;
};

inline nlohmann::json manifest_to_json(const RunManifest& m) {
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& [path, hash] : m.inputs)
        inputs.push_back({{"path", path}, {"hash", hash}});
    return nlohmann::json{{"subcommand", m.subcommand}, {"config", m.config},
                          {"inputs", inputs},           {"seed", m.seed},
                          {"version", m.version},       {"outputs", m.outputs}};
}

inline std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open input for hashing: " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return hex64(fnv1a64(data.data(), data.size()));
}

inline void write_spectrum_csv(std::ostream& os, const ModelSpectrum& sp) {
    os << "m,kind,value,side,mode\n";
    for (std::size_t i = 0; i < sp.entries.size(); ++i) {
        const SpectrumEntry& e = sp.entries[i];
        os << (i + 1) << "," << to_string(sp.kind) << "," << format_double(e.value) << ","
           << (e.id.side + 1) << "," << e.id.mode << "\n";
    }
}

inline void write_sweep_csv(std::ostream& os, const SweepReport& rep) {
    os << "alpha,m,E_dir,E_neu,lower,upper,remainder,eps_h\n";
    for (const SweepEntry& e : rep.entries)
        os << format_double(e.alpha) << "," << e.m << "," << format_double(e.e_dir) << ","
           << format_double(e.e_neu) << "," << format_double(e.lower) << ","
           << format_double(e.upper) << "," << format_double(e.remainder) << ","
           << format_double(e.eps_h) << "\n";
}

inline nlohmann::json sweep_report_to_json(const SweepReport& rep) {
    nlohmann::json entries = nlohmann::json::array();
    for (const SweepEntry& e : rep.entries)
        entries.push_back({{"alpha", e.alpha},
                           {"m", e.m},
                           {"E_dir", e.e_dir},
                           {"E_neu", e.e_neu},
                           {"lower", e.lower},
                           {"upper", e.upper},
                           {"remainder", e.remainder},
                           {"eps_h", e.eps_h},
                           {"bracket_ok", e.bracket_ok}});
    nlohmann::json counts = nlohmann::json::array();
    for (const auto& [alpha, k] : rep.bound_state_counts)
        counts.push_back({{"alpha", alpha}, {"count", k}});
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : rep.violations)
        violations.push_back({{"alpha", v.alpha}, {"m", v.m}, {"what", v.what}});
    return nlohmann::json{{"config", sweep_config_to_json(rep.config)},
                          {"entries", entries},
                          {"bound_state_counts", counts},
                          {"violations", violations}};
}

// Log-log scatter of |remainder| against alpha, one polyline per mode, with
// the fitted slope per mode in the legend when a fit exists.
inline void write_remainder_svg(std::ostream& os, const SweepReport& rep) {
    const double px = 720.0, py = 540.0, margin = 60.0;
    std::vector<int> modes;
    for (const auto& e : rep.entries)
        if (std::find(modes.begin(), modes.end(), e.m) == modes.end()) modes.push_back(e.m);
    std::sort(modes.begin(), modes.end());

    double lx0 = 1e300, lx1 = -1e300, ly0 = 1e300, ly1 = -1e300;
    for (const auto& e : rep.entries) {
        if (!(e.alpha > 0.0) || !(std::abs(e.remainder) > 0.0)) continue;
        lx0 = std::min(lx0, std::log10(e.alpha));
        lx1 = std::max(lx1, std::log10(e.alpha));
        ly0 = std::min(ly0, std::log10(std::abs(e.remainder)));
        ly1 = std::max(ly1, std::log10(std::abs(e.remainder)));
    }
    if (lx1 <= lx0) lx1 = lx0 + 1.0;
    if (ly1 <= ly0) ly1 = ly0 + 1.0;
    const auto X = [&](double la) { return margin + (la - lx0) / (lx1 - lx0) * (px - 2 * margin); };
    const auto Y = [&](double lr) {
        return py - margin - (lr - ly0) / (ly1 - ly0) * (py - 2 * margin);
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px << "\" height=\"" << py
       << "\">\n";
    os << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << px - 2 * margin
       << "\" height=\"" << py - 2 * margin << "\" fill=\"none\" stroke=\"#444\"/>\n";
    os << "<text x=\"" << px / 2 << "\" y=\"" << py - margin / 3
       << "\" text-anchor=\"middle\" font-size=\"13\">log10 alpha</text>\n";
    os << "<text x=\"" << margin / 3 << "\" y=\"" << py / 2 << "\" font-size=\"13\" "
       << "transform=\"rotate(-90 " << margin / 3 << " " << py / 2
       << ")\" text-anchor=\"middle\">log10 |remainder|</text>\n";

    const char* colors[] = {"#c33", "#36c", "#293", "#a3a", "#a70", "#099"};
    for (std::size_t mi = 0; mi < modes.size(); ++mi) {
        const int m = modes[mi];
        const char* col = colors[mi % 6];
        std::vector<double> as, rs;
        os << "<g fill=\"" << col << "\" stroke=\"" << col << "\">\n<path fill=\"none\" d=\"";
        bool first = true;
        for (const auto& e : rep.entries) {
            if (e.m != m || !(std::abs(e.remainder) > 0.0)) continue;
            as.push_back(e.alpha);
            rs.push_back(std::abs(e.remainder));
            os << (first ? "M" : "L") << format_double(X(std::log10(e.alpha))) << " "
               << format_double(Y(std::log10(std::abs(e.remainder))));
            first = false;
        }
        os << "\"/>\n";
        for (std::size_t i = 0; i < as.size(); ++i)
            os << "<circle cx=\"" << format_double(X(std::log10(as[i]))) << "\" cy=\""
               << format_double(Y(std::log10(rs[i]))) << "\" r=\"3\"/>\n";
        std::string label = "m=" + std::to_string(m);
        try {
            const RateFit fit = fit_rate(as, rs);
            label += " slope " + format_double(fit.slope);
        } catch (const Error&) {
        }
        os << "<text x=\"" << px - margin - 150 << "\" y=\"" << margin + 18 * (mi + 1)
           << "\" font-size=\"12\" stroke=\"none\">" << label << "</text>\n</g>\n";
    }
    os << "</svg>\n";
}

}  // namespace robin
