// Copyright 2026 The dspt Authors
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


#ifndef DSPT_RNG_HPP_
#define DSPT_RNG_HPP_

#include <array>
#include <cstdint>

namespace dspt {

/// Philox4x64-10 counter-based generator. A stream is fixed by a 128-bit
/// key; block k of the stream is the bijection of counter k under the key.
class Philox4x64 {
 public:
  using result_type = std::uint64_t;
  using Block = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  explicit Philox4x64(Key key, std::uint64_t start_block = 0) : key_(key), counter_{start_block, 0, 0, 0} {}

  static Block bijection(Block ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      unsigned __int128 p0 = static_cast<unsigned __int128>(kM0) * ctr[0];
      unsigned __int128 p1 = static_cast<unsigned __int128>(kM1) * ctr[2];
      auto hi0 = static_cast<std::uint64_t>(p0 >> 64), lo0 = static_cast<std::uint64_t>(p0);
      auto hi1 = static_cast<std::uint64_t>(p1 >> 64), lo1 = static_cast<std::uint64_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

  std::uint64_t operator()() {
    if (pos_ == 4) {
      buf_ = bijection(counter_, key_);
      // 256-bit counter increment.
      for (auto& c : counter_) {
        if (++c != 0) break;
      }
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  /// Uniform double in the open interval (0, 1) with 53 random bits.
  double uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

 private:
  static constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

  Key key_;
  Block counter_;
  Block buf_{};
  int pos_ = 4;
};

/// Stream purposes, mixed into the second key word.
enum class StreamTag : std::uint64_t { Trajectory = 0x6a756d70ULL, InitialState = 0x696e6974ULL, Synthetic = 0x73796e74ULL };

inline Philox4x64 make_stream(std::uint64_t seed, StreamTag tag) {
  return Philox4x64({seed, static_cast<std::uint64_t>(tag)});
}

}  // namespace dspt

#endif  // DSPT_RNG_HPP_
