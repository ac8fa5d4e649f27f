/*
   Copyright 2026 The maxmart Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace maxmart {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Stateless: every output block is a pure function of (key, counter), so a
/// draw can be addressed directly by (seed, path, step) without sequencing.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter ctr, Key key) noexcept
    {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeylA;
                key[1] += kWeylB;
            }
            const std::uint64_t p0 = std::uint64_t{kMulA} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMulB} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kMulA = 0xD2511F53u;
    static constexpr std::uint32_t kMulB = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeylA = 0x9E3779B9u;
    static constexpr std::uint32_t kWeylB = 0xBB67AE85u;
};

/// Independent sub-streams of one path. Each stream owns its own counter
/// space so adding a consumer never perturbs another one.
enum class Stream : std::uint32_t {
    increments = 0,
    bridge = 1,
    auxiliary = 2,
    /// Zero and band touches of the downcrossing local time between grid points.
    crossings = 3,
};

/// Addresses random draws by (seed, path index, stream, position).
///
/// Position p maps to block p / 2 of the stream; each block yields two
/// doubles. Used for one-off draws such as per-path coins.
class PathRandom {
public:
    PathRandom(std::uint64_t seed, std::uint64_t path_index) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          path_lo_(static_cast<std::uint32_t>(path_index)),
          path_hi_(static_cast<std::uint32_t>(path_index >> 32))
    {
    }

    /// Two uniforms in (0, 1] from block `block` of `stream`.
    std::array<double, 2> uniform_pair(Stream stream, std::uint32_t block) const noexcept
    {
        const auto out = Philox4x32::generate(
            {path_lo_, path_hi_, block, static_cast<std::uint32_t>(stream)}, key_);
        const std::uint64_t a = (std::uint64_t{out[0]} << 32) | out[1];
        const std::uint64_t b = (std::uint64_t{out[2]} << 32) | out[3];
        return {to_unit(a), to_unit(b)};
    }

    double uniform(Stream stream, std::uint64_t position) const noexcept
    {
        return uniform_pair(stream, static_cast<std::uint32_t>(position >> 1))[position & 1];
    }

private:
    static double to_unit(std::uint64_t bits) noexcept
    {
        return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
    }

    Philox4x32::Key key_;
    std::uint32_t path_lo_;
    std::uint32_t path_hi_;
};

/// Sequential 64-bit words from one (seed, path, stream) counter space,
/// generated 256 at a time.
class WordStream {
public:
    WordStream(std::uint64_t seed, std::uint64_t path_index, Stream stream) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          path_lo_(static_cast<std::uint32_t>(path_index)),
          path_hi_(static_cast<std::uint32_t>(path_index >> 32)),
          stream_(static_cast<std::uint32_t>(stream))
    {
    }

    std::uint64_t next() noexcept
    {
        if (pos_ == kWords) {
            refill();
        }
        return buffer_[pos_++];
    }

    /// Uniform in (0, 1].
    double uniform() noexcept { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

private:
    static constexpr int kWords = 256;

    void refill() noexcept;

    Philox4x32::Key key_;
    std::uint32_t path_lo_;
    std::uint32_t path_hi_;
    std::uint32_t stream_;
    std::uint32_t block_ = 0;
    int pos_ = kWords;
    alignas(64) std::array<std::uint64_t, kWords> buffer_{};
};

/// Standard normal variates by the 256-layer Marsaglia-Tsang ziggurat.
/// Layer index, sign and abscissa come from disjoint bits of one word.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t path_index) noexcept
        : words_(seed, path_index, Stream::increments)
    {
    }

    double next() noexcept;

private:
    WordStream words_;
};

} // namespace maxmart

