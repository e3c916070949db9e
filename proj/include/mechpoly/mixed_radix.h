// Copyright 2026 The Mechpoly Authors
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

#ifndef MECHPOLY_MIXED_RADIX_H_
#define MECHPOLY_MIXED_RADIX_H_

#include <cstdint>
#include <vector>

#include "mechpoly/errors.h"

namespace mechpoly {

// Row-major indexing of a product of finite sets. Position 0 is the most
// significant digit, so iterating indices 0..Size()-1 visits tuples in
// lexicographic order of their declared labels.
class MixedRadix {
 public:
  MixedRadix() = default;
  explicit MixedRadix(std::vector<int> radices) : radices_(std::move(radices)) {
    strides_.assign(radices_.size(), 1);
    std::int64_t size = 1;
    for (int p = static_cast<int>(radices_.size()) - 1; p >= 0; --p) {
      if (radices_[p] <= 0) throw InputError("mixed radix with empty factor");
      strides_[p] = static_cast<int>(size);
      size *= radices_[p];
      if (size > (std::int64_t{1} << 31) - 1) {
        throw DimensionTooLarge("product space exceeds 2^31 elements");
      }
    }
    size_ = static_cast<int>(size);
  }

  int Size() const { return size_; }
  int NumDigits() const { return static_cast<int>(radices_.size()); }
  int Radix(int pos) const { return radices_[pos]; }
  const std::vector<int>& Radices() const { return radices_; }

  int Digit(int index, int pos) const {
    return (index / strides_[pos]) % radices_[pos];
  }

  std::vector<int> Decode(int index) const {
    std::vector<int> digits(radices_.size());
    for (int p = 0; p < NumDigits(); ++p) digits[p] = Digit(index, p);
    return digits;
  }

  int Encode(const std::vector<int>& digits) const {
    int index = 0;
    for (int p = 0; p < NumDigits(); ++p) index += digits[p] * strides_[p];
    return index;
  }

  int Replace(int index, int pos, int value) const {
    return index + (value - Digit(index, pos)) * strides_[pos];
  }

 private:
  std::vector<int> radices_;
  std::vector<int> strides_;
  int size_ = 1;
};

}  // namespace mechpoly

#endif  // MECHPOLY_MIXED_RADIX_H_
