#pragma once

#include "rmzeta/cli.hpp"
#include "rmzeta/config.hpp"
#include "rmzeta/distances.hpp"
#include "rmzeta/errors.hpp"
#include "rmzeta/fock.hpp"
#include "rmzeta/linalg.hpp"
#include "rmzeta/models.hpp"
#include "rmzeta/regdet.hpp"
#include "rmzeta/selftest.hpp"
#include "rmzeta/spinchain.hpp"
#include "rmzeta/transfer.hpp"
#include "rmzeta/zeta.hpp"
