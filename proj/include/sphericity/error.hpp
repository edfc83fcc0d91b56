// SPDX-License-Identifier: Apache-2.0
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

#pragma once

#include <stdexcept>
#include <string>

namespace sphericity {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A formula's validity condition (e.g. moment existence) does not hold.
class ValidityError : public std::invalid_argument {
public:
    explicit ValidityError(const std::string& what) : std::invalid_argument(what) {}
};

/// The requested computation exceeds the configured work limit.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative solver failed to meet its tolerance.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// The requested combination of inputs has no supported formula.
class UnsupportedError : public std::logic_error {
public:
    explicit UnsupportedError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace sphericity
