/*
 * Copyright 2026 The gwcd Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GWCD_GWCD_HPP
#define GWCD_GWCD_HPP

#include "gwcd/contour.hpp"
#include "gwcd/core.hpp"
#include "gwcd/greens.hpp"
#include "gwcd/ks_system.hpp"
#include "gwcd/ksd_io.hpp"
#include "gwcd/lowrank.hpp"
#include "gwcd/model1d.hpp"
#include "gwcd/quadrature.hpp"
#include "gwcd/reporting.hpp"
#include "gwcd/response.hpp"
#include "gwcd/sigma.hpp"
#include "gwcd/spectra.hpp"

#endif  // GWCD_GWCD_HPP
