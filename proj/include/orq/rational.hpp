#pragma once

#include <string>

#include <boost/rational.hpp>

namespace orq {

using Rational = boost::rational<long long>;

inline std::string to_string(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" +
                                    std::to_string(r.denominator());
}

inline double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

}  // namespace orq
