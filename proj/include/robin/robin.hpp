#pragma once

#include "robin/assembly.hpp"
#include "robin/core.hpp"
#include "robin/eigensolver.hpp"
#include "robin/errors.hpp"
#include "robin/geometry.hpp"
#include "robin/io.hpp"
#include "robin/mesh.hpp"
#include "robin/mesh_io.hpp"
#include "robin/model_spectra.hpp"
#include "robin/pool.hpp"
#include "robin/profiles.hpp"
#include "robin/report.hpp"
#include "robin/sweep.hpp"
#include "robin/synthetic.hpp"
#include "robin/variational.hpp"
