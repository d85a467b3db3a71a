#include "orbitred/rational.hpp"

#include <cctype>

#include "orbitred/error.hpp"

namespace orbitred {

Rational make_rational(long num, long den) {
  if (den == 0) fail(ErrorCode::ParseError, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) fail(ErrorCode::ParseError, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Rational frac(const Rational& q) { return q - Rational(floor_of(q)); }

Rational abs_of(const Rational& q) { return q < 0 ? Rational(-q) : q; }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) fail(ErrorCode::ParseError, "bad integer '" + std::string(s) + "'");
  Integer v(std::string(s), 10);
  return neg ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) fail(ErrorCode::ParseError, "empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) fail(ErrorCode::ParseError, "bad denominator in '" + std::string(text) + "'");
    Integer den(std::string(den_text), 10);
    return make_rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view digits = text.substr(dot + 1);
    bool neg = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(digits))
      fail(ErrorCode::ParseError, "bad decimal '" + std::string(text) + "'");
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits.size());
    Integer num = Integer(std::string(whole.empty() ? "0" : whole), 10) * scale +
                  Integer(std::string(digits), 10);
    if (neg) num = -num;
    return make_rational(num, scale);
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::uint64_t fingerprint(const Rational& q, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (char c : to_string(q)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  // separator so that ("1/2","3/4") and ("1/23","/4") never collide
  h ^= 0xff;
  h *= 1099511628211ULL;
  return h;
}

}  // namespace orbitred
