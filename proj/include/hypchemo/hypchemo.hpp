#ifndef HYPCHEMO_HYPCHEMO_HPP
#define HYPCHEMO_HYPCHEMO_HPP

#include "hypchemo/banded.hpp"
#include "hypchemo/config.hpp"
#include "hypchemo/kinetic1d.hpp"
#include "hypchemo/ks1d.hpp"
#include "hypchemo/lf2d.hpp"
#include "hypchemo/mesh.hpp"
#include "hypchemo/model.hpp"
#include "hypchemo/run.hpp"
#include "hypchemo/wb1d.hpp"

#endif // HYPCHEMO_HYPCHEMO_HPP
