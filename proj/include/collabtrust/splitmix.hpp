// Copyright 2026 The collabtrust Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace collabtrust {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// High 64 bits of a 64x64-bit product.
constexpr std::uint64_t mulhi64(std::uint64_t a, std::uint64_t b) noexcept {
    const std::uint64_t a_lo = a & 0xFFFFFFFFULL, a_hi = a >> 32;
    const std::uint64_t b_lo = b & 0xFFFFFFFFULL, b_hi = b >> 32;
    const std::uint64_t lo_lo = a_lo * b_lo;
    const std::uint64_t hi_lo = a_hi * b_lo;
    const std::uint64_t lo_hi = a_lo * b_hi;
    const std::uint64_t cross = (lo_lo >> 32) + (hi_lo & 0xFFFFFFFFULL) + lo_hi;
    return a_hi * b_hi + (hi_lo >> 32) + (cross >> 32);
}

/// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Bit-exact SplitMix64 stream. Every source of randomness in the
/// simulator is one of these, so runs reproduce across platforms.
class SplitMix64 {
public:
    constexpr explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += kGolden;
        return mix64(state_);
    }

    /// Uniform integer in [0, bound). bound must be nonzero.
    constexpr std::uint64_t below(std::uint64_t bound) noexcept {
        return mulhi64(next(), bound);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    constexpr double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// True with probability p. p <= 0 never draws true, p >= 1 always does.
    constexpr bool bernoulli(double p) noexcept { return unit() < p; }

    constexpr std::uint64_t state() const noexcept { return state_; }

private:
    std::uint64_t state_;
};

// Salts separating the named streams derived from one scenario seed.
inline constexpr std::uint64_t kNetworkStreamSalt = 0x6E6574776F726B21ULL;   // "network!"
inline constexpr std::uint64_t kGroupingStreamSalt = 0x67726F7570696E67ULL;  // "grouping"
inline constexpr std::uint64_t kDeviceStreamSalt = 0x6465766963657321ULL;    // "devices!"

/// Seed of a named stream. Nearby scenario seeds (seed, seed+1, ...) give
/// unrelated streams.
constexpr std::uint64_t stream_seed(std::uint64_t scenario_seed, std::uint64_t salt) noexcept {
    return mix64(scenario_seed ^ salt);
}

/// Per-device stream: the device's id XORed into its salted seed, so adding
/// a device never perturbs another device's randomness.
constexpr std::uint64_t device_stream_seed(std::uint64_t scenario_seed, std::uint32_t id) noexcept {
    return stream_seed(scenario_seed, kDeviceStreamSalt) ^ id;
}

}  // namespace collabtrust
