#include "plp/rational.hpp"
#include "plp/numkernel.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace plp {

Rat::Rat(long num, long den) : v_(num, den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  v_.canonicalize();
}

Rat::Rat(const mpq_class& q) : v_(q) {
  if (sgn(v_.get_den()) == 0) throw std::invalid_argument("zero denominator");
  v_.canonicalize();
}

Rat::Rat(const mpz_class& num, const mpz_class& den) : v_(num, den) {
  if (sgn(den) == 0) throw std::invalid_argument("zero denominator");
  v_.canonicalize();
}

Rat Rat::from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite double");
  Rat r;
  mpq_set_d(r.v_.get_mpq_t(), value);
  return r;
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw std::domain_error("rational division by zero");
  mpq_div(v_.get_mpq_t(), v_.get_mpq_t(), o.v_.get_mpq_t());
  return *this;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace

Rat Rat::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (sgn(d) == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  if (negative) n = -n;
  return Rat(n, d);
}

std::ostream& operator<<(std::ostream& os, const Rat& x) { return os << x.str(); }

std::size_t hash_value(const Rat& x) {
  const mpq_srcptr q = x.value().get_mpq_t();
  std::size_t h = mpz_size(mpq_numref(q)) ? mpz_getlimbn(mpq_numref(q), 0) : 0;
  h ^= static_cast<std::size_t>(mpz_getlimbn(mpq_denref(q), 0)) * 0x9e3779b97f4a7c15ULL;
  return h ^ static_cast<std::size_t>(x.sign() + 1);
}

double to_float(const Rat& x) {
  const int s = x.sign();
  if (s == 0) return 0.0;
  {
    // both exactly representable: one IEEE division rounds correctly
    const mpz_srcptr n = mpq_numref(x.value().get_mpq_t());
    const mpz_srcptr d = mpq_denref(x.value().get_mpq_t());
    if (mpz_sizeinbase(n, 2) <= 53 && mpz_sizeinbase(d, 2) <= 53) return mpz_get_d(n) / mpz_get_d(d);
  }
  mpz_class num = abs(x.value().get_num());
  const mpz_class& den = x.value().get_den();

  // Quotient with ~64 significant bits plus a sticky bit for the remainder.
  const long nb = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
  const long db = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  const long shift = 64 - (nb - db);
  mpz_class q;
  mpz_class r;
  if (shift >= 0) {
    mpz_class scaled = num << static_cast<mp_bitcnt_t>(shift);
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
  } else {
    mpz_class scaled = den << static_cast<mp_bitcnt_t>(-shift);
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), scaled.get_mpz_t());
  }
  const bool sticky = sgn(r) != 0;

  const long qbits = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2));
  const long exponent = qbits - 1 - shift;  // value in [2^exponent, 2^(exponent+1))
  const double sign = s < 0 ? -1.0 : 1.0;
  if (exponent > std::numeric_limits<double>::max_exponent - 1) return sign * HUGE_VAL;

  long keep = 53;
  if (exponent < -1022) keep = 53 - (-1022 - exponent);
  if (keep < 0) return sign * 0.0;

  const long drop = qbits - keep;
  mpz_class mant;
  if (drop <= 0) {
    mant = q;
  } else {
    mpz_tdiv_q_2exp(mant.get_mpz_t(), q.get_mpz_t(), static_cast<mp_bitcnt_t>(drop));
    mpz_class rem;
    mpz_tdiv_r_2exp(rem.get_mpz_t(), q.get_mpz_t(), static_cast<mp_bitcnt_t>(drop));
    mpz_class half = mpz_class(1) << static_cast<mp_bitcnt_t>(drop - 1);
    const int c = cmp(rem, half);
    const bool odd = mpz_tstbit(mant.get_mpz_t(), 0) != 0;
    if (c > 0 || (c == 0 && (sticky || odd))) mant += 1;
  }
  const double m = mant.get_d();  // at most 2^53, exact
  return sign * std::ldexp(m, static_cast<int>(std::max(drop, 0L) - shift));
}

std::vector<int> independent_rows(const RatMat& M) {
  std::vector<int> picked;
  std::vector<RatVec> basis;  // echelon rows
  std::vector<Eigen::Index> lead;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    RatVec row = M.row(i).transpose();
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Rat& f = row(lead[b]);
      if (f.is_zero()) continue;
      const Rat factor = f;
      for (Eigen::Index c = 0; c < row.size(); ++c)
        if (!basis[b](c).is_zero()) row(c) -= factor * basis[b](c);
    }
    Eigen::Index pivot = -1;
    for (Eigen::Index c = 0; c < row.size(); ++c)
      if (!row(c).is_zero()) {
        pivot = c;
        break;
      }
    if (pivot < 0) continue;
    const Rat inv = Rat(1) / row(pivot);
    for (Eigen::Index c = 0; c < row.size(); ++c) row(c) *= inv;
    // keep the echelon basis reduced so each lead column is clear elsewhere
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Rat f = basis[b](pivot);
      if (f.is_zero()) continue;
      for (Eigen::Index c = 0; c < row.size(); ++c)
        if (!row(c).is_zero()) basis[b](c) -= f * row(c);
    }
    basis.push_back(std::move(row));
    lead.push_back(pivot);
    picked.push_back(static_cast<int>(i));
  }
  return picked;
}

Rat max_abs(const RatVec& v) {
  Rat best(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Rat a = abs(v(i));
    if (a > best) best = std::move(a);
  }
  return best;
}

Vec<double> to_float(const RatVec& v) {
  Vec<double> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = to_float(v(i));
  return out;
}

Mat<double> to_float(const RatMat& m) {
  Mat<double> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = to_float(m(i, j));
  return out;
}

std::string format_vec(const RatVec& v) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << ')';
  return os.str();
}

}  // namespace plp
