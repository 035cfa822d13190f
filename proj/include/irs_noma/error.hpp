// SPDX-License-Identifier: Apache-2.0
//
// irs-noma: IRS-assisted downlink NOMA simulation and DDPG phase control
// Copyright (C) 2026 The irs-noma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef IRS_NOMA_ERROR_HPP
#define IRS_NOMA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace irs_noma {

// Root of every exception thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Out-of-range or otherwise invalid numeric parameter.
struct ParameterError : Error {
    using Error::Error;
};

// Vector/matrix lengths that do not agree.
struct DimensionError : Error {
    using Error::Error;
};

// Operation invoked on an object in the wrong lifecycle state.
struct StateError : Error {
    using Error::Error;
};

// Input outside the mathematical domain of a function (e.g. negative SINR).
struct DomainError : Error {
    using Error::Error;
};

// NaN or infinity where a finite value is required.
struct NumericError : Error {
    using Error::Error;
};

// Malformed configuration file, unknown key or bad CLI usage.
struct ConfigError : Error {
    using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ParameterError(what);
}

inline void require_dims(bool ok, const std::string& what) {
    if (!ok) throw DimensionError(what);
}

} // namespace detail
} // namespace irs_noma

#endif
