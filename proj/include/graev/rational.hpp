#pragma once

#include <cstdint>      // for int64_t
#include <stdexcept>    // for invalid_argument
#include <string>       // for string, to_string
#include <string_view>  // for string_view

#include <boost/rational.hpp>

namespace graev {

  // Every distance, norm and sum in the library is one of these; boost keeps
  // the fraction normalized (positive denominator, coprime parts).  Compare
  // against Rational(k), not a bare integer: under C++20 the mixed operator==
  // of boost::rational rewrites into itself and recurses forever.
  using Rational = boost::rational<std::int64_t>;

  inline std::string to_string(Rational const& q) {
    if (q.denominator() == 1) {
      return std::to_string(q.numerator());
    }
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
  }

  namespace detail {
    inline std::int64_t parse_int(std::string_view s, std::string_view whole) {
      if (s.empty()) {
        throw std::invalid_argument("bad rational: '" + std::string(whole) + "'");
      }
      std::size_t i   = 0;
      bool        neg = false;
      if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i   = 1;
      }
      if (i == s.size()) {
        throw std::invalid_argument("bad rational: '" + std::string(whole) + "'");
      }
      std::int64_t v = 0;
      for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') {
          throw std::invalid_argument("bad rational: '" + std::string(whole)
                                      + "'");
        }
        v = v * 10 + (s[i] - '0');
      }
      return neg ? -v : v;
    }
  }  // namespace detail

  // Accepts "p", "p/q" (q != 0), with an optional sign on p.
  inline Rational parse_rational(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) {
      return Rational(detail::parse_int(s, s));
    }
    auto num = detail::parse_int(s.substr(0, slash), s);
    auto den = detail::parse_int(s.substr(slash + 1), s);
    if (den == 0) {
      throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    }
    return Rational(num, den);
  }

}  // namespace graev
