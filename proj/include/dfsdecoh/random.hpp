// Copyright 2026 The dfsdecoh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Counter-based random streams and a block-parallel driver whose results do
// not depend on the number of worker threads.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <thread>
#include <vector>

namespace dfsdecoh {

/// Philox4x32-10 (Salmon et al., SC'11). Stateless: the output is a pure
/// function of (key, counter).
class Philox4x32 {
  public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }

  private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
};

/// Fixed labels separating the random streams drawn from one top-level seed.
enum class StreamLabel : std::uint32_t {
    FieldDfs = 1,
    FieldTest = 2,
    Reservoir = 3,
    Synthetic = 4,
    FourLevelEnsemble = 5,
};

/// Random draws for one (seed, label, index) triple, e.g. one Monte Carlo
/// sample or one trajectory. Draw `j` of the stream is block `j` of Philox.
class CounterStream {
  public:
    CounterStream(std::uint64_t seed, StreamLabel label, std::uint64_t index) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          index_(index),
          label_(static_cast<std::uint32_t>(label)) {
    }

    /// Four raw 32-bit words for draw `j`.
    Philox4x32::Counter words(std::uint32_t j) const noexcept {
        return Philox4x32::generate(
            {static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32), label_, j}, key_);
    }

    /// Two uniforms strictly inside (0, 1) with 53-bit resolution.
    std::array<double, 2> uniform_pair(std::uint32_t j) const noexcept {
        const auto w = words(j);
        return {to_open_unit((std::uint64_t{w[0]} << 32) | w[1]), to_open_unit((std::uint64_t{w[2]} << 32) | w[3])};
    }

    double uniform(std::uint32_t j) const noexcept {
        return uniform_pair(j)[0];
    }

    /// Standard normal by Box-Muller on draw `j`.
    double normal(std::uint32_t j) const noexcept {
        const auto [u1, u2] = uniform_pair(j);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

  private:
    static double to_open_unit(std::uint64_t bits) noexcept {
        return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
    }

    Philox4x32::Key key_;
    std::uint64_t index_;
    std::uint32_t label_;
};

inline unsigned resolve_threads(unsigned requested) noexcept {
    if (requested != 0) {
        return requested;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Evaluates `fn(block)` for every block in [0, n_blocks) on up to `threads`
/// workers and returns the results indexed by block. Callers reduce the
/// returned vector in order, so the outcome is independent of scheduling.
template <class Fn>
auto run_blocks(std::size_t n_blocks, unsigned threads, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using Result = decltype(fn(std::size_t{}));
    std::vector<Result> results(n_blocks);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), n_blocks));
    if (workers <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) {
            results[b] = fn(b);
        }
        return results;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t b = next++; b < n_blocks; b = next++) {
                        results[b] = fn(b);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                    next = n_blocks;
                }
            });
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return results;
}

}  // namespace dfsdecoh
