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

#include "maxmart/rng.hpp"

#include <cmath>

namespace maxmart {

namespace {

constexpr int kLayers = 256;
constexpr double kTailStart = 3.6541528853610088;
constexpr double kLayerArea = 0.00492867323399;

struct ZigguratTables {
    std::array<double, kLayers + 1> x{};
    std::array<double, kLayers + 1> density{};

    ZigguratTables()
    {
        auto f = [](double t) { return std::exp(-0.5 * t * t); };
        x[0] = kLayerArea / f(kTailStart);
        x[1] = kTailStart;
        for (int i = 1; i < kLayers; ++i) {
            x[i + 1] = std::sqrt(-2.0 * std::log(f(x[i]) + kLayerArea / x[i]));
        }
        x[kLayers] = 0.0;
        for (int i = 0; i <= kLayers; ++i) {
            density[i] = f(x[i]);
        }
    }
};

const ZigguratTables& tables()
{
    static const ZigguratTables t;
    return t;
}

} // namespace

void WordStream::refill() noexcept
{
    for (int j = 0; j < kWords / 2; ++j) {
        const auto out = Philox4x32::generate(
            {path_lo_, path_hi_, block_ + static_cast<std::uint32_t>(j), stream_}, key_);
        buffer_[2 * j] = (std::uint64_t{out[0]} << 32) | out[1];
        buffer_[2 * j + 1] = (std::uint64_t{out[2]} << 32) | out[3];
    }
    block_ += kWords / 2;
    pos_ = 0;
}

double NormalStream::next() noexcept
{
    const auto& t = tables();
    for (;;) {
        const std::uint64_t bits = words_.next();
        const int layer = static_cast<int>(bits & 0xFF);
        const double sign = (bits & 0x100) ? -1.0 : 1.0;
        const double x = static_cast<double>(bits >> 11) * 0x1.0p-53 * t.x[layer];
        if (x < t.x[layer + 1]) {
            return sign * x;
        }
        if (layer == 0) {
            // Marsaglia's tail sampler beyond the last layer.
            double dx = 0.0;
            double dy = 0.0;
            do {
                dx = -std::log(words_.uniform()) / kTailStart;
                dy = -std::log(words_.uniform());
            } while (2.0 * dy < dx * dx);
            return sign * (kTailStart + dx);
        }
        const double y = t.density[layer]
            + words_.uniform() * (t.density[layer + 1] - t.density[layer]);
        if (y < std::exp(-0.5 * x * x)) {
            return sign * x;
        }
    }
}

} // namespace maxmart
