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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sphericity {

/// Problem geometry: n antennas, m observation samples, c = n/m.
class DetectorDims {
public:
    /// Throws ValidityError unless 1 <= n <= m.
    DetectorDims(int n, int m);

    int n() const noexcept { return n_; }
    int m() const noexcept { return m_; }
    double c() const noexcept { return static_cast<double>(n_) / m_; }
    bool square() const noexcept { return n_ == m_; }

    /// Largest moment order with a finite moment: n(m - n + 1) - 1.
    int max_moment_order() const noexcept { return n_ * (m_ - n_ + 1) - 1; }

    friend bool operator==(const DetectorDims&, const DetectorDims&) = default;

private:
    int n_;
    int m_;
};

/// Eigenvalues y_1 <= ... <= y_n of HH^dagger + N0 I and the noise floor N0.
///
/// The constructor sorts its input, so two permutations of the same list
/// compare equal and feed identical evaluation orders downstream.
class ChannelSpectrum {
public:
    ChannelSpectrum(std::vector<double> eigenvalues, double noise_floor);

    /// n copies of `value`; the H0-equivalent spectrum when value == N0.
    static ChannelSpectrum flat(int n, double value, double noise_floor);

    const std::vector<double>& eigenvalues() const noexcept { return y_; }
    double noise_floor() const noexcept { return n0_; }
    int size() const noexcept { return static_cast<int>(y_.size()); }

private:
    std::vector<double> y_;
    double n0_;
};

enum class CumulantSource { exact, asymptotic, c1_branch, empirical };

std::string_view to_string(CumulantSource source);

/// kappa_1 ... kappa_P of a statistic with provenance.
///
/// A zero variance is accepted so that degenerate statistics (n = 1, W = 1)
/// can be represented; consumers that standardize reject sigma == 0.
class CumulantSet {
public:
    CumulantSet(std::vector<double> kappa, CumulantSource source,
                std::optional<DetectorDims> dims = std::nullopt);

    /// kappa_p for 1 <= p <= order().
    double k(int p) const;
    int order() const noexcept { return static_cast<int>(kappa_.size()); }
    const std::vector<double>& kappa() const noexcept { return kappa_; }
    double mean() const noexcept { return kappa_[0]; }
    double variance() const noexcept { return kappa_[1]; }
    double sigma() const noexcept { return sigma_; }
    CumulantSource source() const noexcept { return source_; }
    const std::optional<DetectorDims>& dims() const noexcept { return dims_; }

    const std::vector<std::string>& notes() const noexcept { return notes_; }
    void add_note(std::string note) { notes_.push_back(std::move(note)); }

    /// First P cumulants; notes are carried over.
    CumulantSet truncated(int P) const;

private:
    std::vector<double> kappa_;
    double sigma_;
    CumulantSource source_;
    std::optional<DetectorDims> dims_;
    std::vector<std::string> notes_;
};

}  // namespace sphericity
