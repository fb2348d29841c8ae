// Copyright 2026 The lopa Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef LOPA_LOPA_HPP_
#define LOPA_LOPA_HPP_

#include "lopa/core/array.hpp"
#include "lopa/core/exception.hpp"
#include "lopa/core/executor.hpp"
#include "lopa/core/kernel.hpp"
#include "lopa/core/linop.hpp"
#include "lopa/core/pass.hpp"
#include "lopa/core/polymorphic_object.hpp"
#include "lopa/core/types.hpp"
#include "lopa/matrix/convert.hpp"
#include "lopa/matrix/coo.hpp"
#include "lopa/matrix/csr.hpp"
#include "lopa/matrix/dense.hpp"
#include "lopa/matrix/matrix_data.hpp"
#include "lopa/matrix/stencil.hpp"
#include "lopa/io/matrix_market.hpp"
#include "lopa/log/logger.hpp"
#include "lopa/log/loggers.hpp"
#include "lopa/stop/combined.hpp"
#include "lopa/stop/criterion.hpp"
#include "lopa/stop/iteration.hpp"
#include "lopa/stop/residual_norm.hpp"
#include "lopa/stop/stopping_status.hpp"
#include "lopa/stop/time.hpp"
#include "lopa/solver/bicgstab.hpp"
#include "lopa/solver/cg.hpp"
#include "lopa/solver/cgs.hpp"
#include "lopa/solver/config.hpp"
#include "lopa/solver/fcg.hpp"
#include "lopa/solver/gmres.hpp"
#include "lopa/solver/ir.hpp"
#include "lopa/solver/solver_base.hpp"
#include "lopa/solver/triangular.hpp"
#include "lopa/precond/ilu.hpp"
#include "lopa/precond/jacobi.hpp"
#include "lopa/model/traffic_model.hpp"

#endif  // LOPA_LOPA_HPP_
