/*
Copyright 2026 The coursealloc Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#ifndef COURSEALLOC_RATIONAL_HPP_
#define COURSEALLOC_RATIONAL_HPP_

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace coursealloc {

// Exact probabilities, scores and LP values are GMP rationals.
using Rational = mpq_class;

// "num/den", or "num" when the denominator is 1.
std::string ToString(const Rational& q);

// Accepts "num/den", integers and finite decimals ("0.25", "-1.5e-3").
// Decimals are converted exactly (0.1 -> 1/10). Throws std::invalid_argument.
Rational ParseRational(std::string_view text);

// Exact value of a binary double.
Rational FromDouble(double v);

inline double ToDouble(const Rational& q) { return q.get_d(); }

}  // namespace coursealloc

#endif  // COURSEALLOC_RATIONAL_HPP_
