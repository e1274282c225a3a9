// Copyright 2026 The stripdet Authors
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

#include "stripdet/rng.hpp"

namespace stripdet {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t sub) noexcept {
  std::uint64_t h = mix64(master ^ 0x6A09E667F3BCC909ULL);
  h = mix64(h ^ (stream + 0x9E3779B97F4A7C15ULL));
  h = mix64(h ^ (sub + 0xBB67AE8584CAA73BULL));
  return h;
}

}  // namespace stripdet
