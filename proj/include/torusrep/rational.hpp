#pragma once

// Exact rational scalars.
//
// Values whose reduced numerator and denominator fit in 62 bits are stored
// inline; anything larger is promoted to a shared, immutable GMP rational.
// The representation is canonical: a value is stored inline if and only if it
// fits, so equality never has to compare across representations.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <memory>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace torusrep {

class Rational {
 public:
  Rational() = default;
  Rational(int v) : num_(v) {}
  Rational(long v) { assign(static_cast<i128>(v), 1); }
  Rational(long long v) { assign(static_cast<i128>(v), 1); }
  Rational(long long num, long long den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    assign(static_cast<i128>(num), static_cast<i128>(den));
  }

  static Rational from_mpq(const mpq_class& q) {
    Rational r;
    r.assign_big(q);
    return r;
  }

  /// Parses `p`, `-p`, or `p/q`. Whitespace is not accepted.
  static Rational parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("Rational: empty string");
    auto valid_int = [](std::string_view s) {
      if (s.empty()) return false;
      std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
      if (i == s.size()) return false;
      for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
      return true;
    };
    auto slash = text.find('/');
    std::string num(text.substr(0, slash));
    std::string den = slash == std::string_view::npos ? "1" : std::string(text.substr(slash + 1));
    if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
      throw std::invalid_argument("Rational: cannot parse '" + std::string(text) + "'");
    if (num[0] == '+') num.erase(0, 1);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    mpq_class q(n, d);
    q.canonicalize();
    return from_mpq(q);
  }

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  bool is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }
  int sign() const {
    if (big_) return sgn(*big_);
    return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
  }

  mpq_class to_mpq() const {
    if (big_) return *big_;
    mpq_class q;
    mpz_set_si(q.get_num_mpz_t(), num_);
    mpz_set_si(q.get_den_mpz_t(), den_);
    return q;
  }

  /// Largest integer not exceeding the value.
  Rational floor() const {
    if (!big_) {
      long long q = num_ / den_;
      if (num_ % den_ != 0 && num_ < 0) --q;
      return Rational(q);
    }
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
    return from_mpq(mpq_class(f));
  }

  /// Value minus its floor, in [0, 1).
  Rational frac() const { return *this - floor(); }

  std::string to_string() const {
    if (big_) return big_->get_str(10);
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  Rational operator-() const {
    if (!big_) {
      Rational r;
      r.num_ = -num_;
      r.den_ = den_;
      return r;
    }
    return from_mpq(-*big_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      Rational r;
      if (a.den_ == b.den_) {
        r.assign(static_cast<i128>(a.num_) + b.num_, a.den_);
      } else {
        r.assign(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                 static_cast<i128>(a.den_) * b.den_);
      }
      return r;
    }
    return from_mpq(mpq_class(a.to_mpq() + b.to_mpq()));
  }

  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.num_ == 0 || b.num_ == 0) return Rational();
      Rational r;
      r.assign(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
      return r;
    }
    return from_mpq(mpq_class(a.to_mpq() * b.to_mpq()));
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    if (!a.big_ && !b.big_) {
      Rational r;
      r.assign(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
      return r;
    }
    return from_mpq(mpq_class(a.to_mpq() / b.to_mpq()));
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;  // canonical representation
  }

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      i128 l = static_cast<i128>(a.num_) * b.den_;
      i128 r = static_cast<i128>(b.num_) * a.den_;
      return l < r ? std::strong_ordering::less
                   : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    int c = cmp(a.to_mpq(), b.to_mpq());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  using i128 = __int128;
  using u128 = unsigned __int128;
  static constexpr long long kLimit = 1LL << 62;

  static u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
      if ((a >> 64) == 0 && (b >> 64) == 0)
        return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
      u128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static mpz_class to_mpz(i128 v) {
    bool neg = v < 0;
    u128 mag = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
    std::uint64_t limbs[2] = {static_cast<std::uint64_t>(mag), static_cast<std::uint64_t>(mag >> 64)};
    mpz_class z;
    mpz_import(z.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, limbs);
    if (neg) z = -z;
    return z;
  }

  void assign(i128 num, i128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num == 0) {
      num_ = 0;
      den_ = 1;
      big_.reset();
      return;
    }
    u128 mag = num < 0 ? static_cast<u128>(-num) : static_cast<u128>(num);
    u128 g = gcd128(mag, static_cast<u128>(den));
    if (g > 1) {
      num /= static_cast<i128>(g);
      den /= static_cast<i128>(g);
    }
    if (num > -kLimit && num < kLimit && den < kLimit) {
      num_ = static_cast<long long>(num);
      den_ = static_cast<long long>(den);
      big_.reset();
      return;
    }
    mpq_class q(to_mpz(num), to_mpz(den));
    big_ = std::make_shared<const mpq_class>(std::move(q));
    num_ = 0;
    den_ = 1;
  }

  void assign_big(const mpq_class& q) {
    const mpz_class& n = q.get_num();
    const mpz_class& d = q.get_den();
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 62 && mpz_sizeinbase(d.get_mpz_t(), 2) <= 62) {
      num_ = mpz_get_si(n.get_mpz_t());
      den_ = mpz_get_si(d.get_mpz_t());
      big_.reset();
      return;
    }
    big_ = std::make_shared<const mpq_class>(q);
    num_ = 0;
    den_ = 1;
  }

  long long num_ = 0;
  long long den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

}  // namespace torusrep
