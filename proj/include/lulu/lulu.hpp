// Copyright 2026 The lulu Authors.
//
// Use of this source code is governed by the Apache License 2.0
// that can be found in the LICENSE file.

#ifndef LULU_LULU_HPP
#define LULU_LULU_HPP

#include "lulu/connectivity.hpp"
#include "lulu/dpt.hpp"
#include "lulu/grid.hpp"
#include "lulu/noise.hpp"
#include "lulu/operators.hpp"
#include "lulu/oracle.hpp"
#include "lulu/pgm.hpp"
#include "lulu/pulse_io.hpp"
#include "lulu/total_variation.hpp"

#endif  // LULU_LULU_HPP
