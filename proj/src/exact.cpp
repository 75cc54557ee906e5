#include "wrest/exact.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace wrest {

BigRational make_rational(long long num, long long den) {
    if (den == 0) throw std::invalid_argument("make_rational: zero denominator");
    BigInt n(static_cast<long>(num)), d(static_cast<long>(den));
    BigRational q(n, d);
    q.canonicalize();
    return q;
}

BigRational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite input");
    BigRational q;
    mpq_set_d(q.get_mpq_t(), x);
    return q;
}

BigInt height(const BigRational& x) {
    BigInt num = abs(x.get_num());
    BigInt den = x.get_den();
    return num > den ? num : den;
}

BigRational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
    if (s.find('/') != std::string::npos) {
        BigRational q;
        if (q.set_str(s, 10) != 0) throw std::invalid_argument("parse_rational: bad fraction: " + s);
        q.canonicalize();
        return q;
    }
    // Decimal form [-]ddd[.ddd][e[+-]ddd], read exactly.
    std::size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') neg = (s[i++] == '-');
    std::string digits;
    long long frac_digits = 0, exp10 = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++];
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            digits += s[i++];
            ++frac_digits;
        }
    }
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = (s[i++] == '-');
        std::string e;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) e += s[i++];
        if (e.empty()) throw std::invalid_argument("parse_rational: bad exponent: " + s);
        exp10 = std::stoll(e);
        if (eneg) exp10 = -exp10;
    }
    if (i != s.size() || digits.empty())
        throw std::invalid_argument("parse_rational: bad number: " + s);

    BigInt mant(digits, 10);
    if (neg) mant = -mant;
    long long e = exp10 - frac_digits;
    BigInt num = mant, den = 1;
    BigInt ten = 10;
    if (e > 0) {
        BigInt p;
        mpz_pow_ui(p.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(e));
        num *= p;
    } else if (e < 0) {
        mpz_pow_ui(den.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(-e));
    }
    BigRational q(num, den);
    q.canonicalize();
    return q;
}

std::string rational_to_string(const BigRational& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

ExactMatrix ExactMatrix::from_rows(const std::vector<std::vector<BigRational>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows[0].size() : 0;
    ExactMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw std::invalid_argument("ExactMatrix: ragged rows");
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

ExactMatrix ExactMatrix::from_integer_rows(const std::vector<std::vector<long long>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows[0].size() : 0;
    ExactMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw std::invalid_argument("ExactMatrix: ragged rows");
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = BigRational(static_cast<long>(rows[i][j]));
    }
    return m;
}

namespace {

// Integer copy with per-row denominator clearing. Returns the clearing
// factor of each row (an lcm of denominators, always positive).
std::vector<std::vector<BigInt>> cleared_rows(const ExactMatrix& m, std::vector<BigInt>& factors) {
    std::vector<std::vector<BigInt>> out(m.rows(), std::vector<BigInt>(m.cols()));
    factors.assign(m.rows(), BigInt(1));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        BigInt l = 1;
        for (std::size_t j = 0; j < m.cols(); ++j)
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m.at(i, j).get_den().get_mpz_t());
        factors[i] = l;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            BigInt scaled = m.at(i, j).get_num() * (l / m.at(i, j).get_den());
            out[i][j] = scaled;
        }
    }
    return out;
}

// Fraction-free elimination in place. Returns rank; sign accumulates row-swap
// parity; last_pivot receives the final pivot (the determinant of the pivot
// block for full-rank square inputs).
std::size_t bareiss(std::vector<std::vector<BigInt>>& a, int& sign, BigInt& last_pivot) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    sign = 1;
    last_pivot = 1;
    BigInt prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        BigInt best = abs(a[r][c]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            BigInt v = abs(a[i][c]);
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0) continue;
        if (piv != r) {
            std::swap(a[piv], a[r]);
            sign = -sign;
        }
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                BigInt t = a[i][j] * a[r][c] - a[i][c] * a[r][j];
                mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        last_pivot = prev;
        ++r;
    }
    return r;
}

} // namespace

std::size_t rank(const ExactMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    std::vector<BigInt> factors;
    auto a = cleared_rows(m, factors);
    int sign;
    BigInt last;
    return bareiss(a, sign, last);
}

BigRational determinant(const ExactMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: non-square matrix");
    if (m.rows() == 0) return BigRational(1);
    std::vector<BigInt> factors;
    auto a = cleared_rows(m, factors);
    int sign;
    BigInt last;
    std::size_t r = bareiss(a, sign, last);
    if (r < m.rows()) return BigRational(0);
    BigInt denom = 1;
    for (const auto& f : factors) denom *= f;
    BigRational det(sign > 0 ? last : -last, denom);
    det.canonicalize();
    return det;
}

std::vector<std::vector<BigInt>> nullspace(const ExactMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    // Gauss-Jordan to reduced row echelon form, exact rationals.
    std::vector<std::vector<BigRational>> w(rows, std::vector<BigRational>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) w[i][j] = m.at(i, j);

    std::vector<std::size_t> pivot_cols;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t piv = row;
        while (piv < rows && w[piv][col] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(w[piv], w[row]);
        BigRational inv = w[row][col];
        for (std::size_t j = col; j < cols; ++j) w[row][j] /= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == row || w[i][col] == 0) continue;
            BigRational f = w[i][col];
            for (std::size_t j = col; j < cols; ++j) w[i][j] -= f * w[row][j];
        }
        pivot_cols.push_back(col);
        ++row;
    }

    std::vector<std::vector<BigInt>> basis;
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_cols) is_pivot[c] = true;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<BigRational> v(cols, BigRational(0));
        v[f] = 1;
        for (std::size_t r2 = 0; r2 < pivot_cols.size(); ++r2) v[pivot_cols[r2]] = -w[r2][f];
        // Primitive integer scaling: clear denominators, divide by gcd,
        // positive leading entry.
        BigInt l = 1;
        for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
        std::vector<BigInt> iv(cols);
        BigInt g = 0;
        for (std::size_t j = 0; j < cols; ++j) {
            iv[j] = v[j].get_num() * (l / v[j].get_den());
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), iv[j].get_mpz_t());
        }
        if (g > 1)
            for (auto& x : iv) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
        for (std::size_t j = 0; j < cols; ++j) {
            if (iv[j] != 0) {
                if (iv[j] < 0)
                    for (auto& x : iv) x = -x;
                break;
            }
        }
        basis.push_back(std::move(iv));
    }

    // Exactness and rank-nullity, checked on every call.
    for (const auto& v : basis) {
        for (std::size_t i = 0; i < rows; ++i) {
            BigRational dot(0);
            for (std::size_t j = 0; j < cols; ++j) dot += m.at(i, j) * BigRational(v[j]);
            if (dot != 0) throw std::logic_error("nullspace: basis vector fails M*v = 0");
        }
    }
    if (pivot_cols.size() != rank(m) || pivot_cols.size() + basis.size() != cols)
        throw std::logic_error("nullspace: rank-nullity violated");
    return basis;
}

BigRational rational_round(const BigRational& x, const BigInt& den_bound) {
    if (den_bound < 1) throw std::invalid_argument("rational_round: denominator bound < 1");
    if (x.get_den() <= den_bound) return x;

    // Continued-fraction convergents h/k; stop before k exceeds the bound,
    // then consider the last admissible semiconvergent.
    BigInt hm1 = 1, h0, km1 = 0, k0 = 1;
    BigRational p = x;
    BigInt a0;
    mpz_fdiv_q(a0.get_mpz_t(), p.get_num().get_mpz_t(), p.get_den().get_mpz_t());
    h0 = a0;
    BigRational frac = p - BigRational(a0);
    while (true) {
        if (frac == 0) break; // exact; den(x) > bound was handled above
        p = BigRational(1) / frac;
        BigInt a;
        mpz_fdiv_q(a.get_mpz_t(), p.get_num().get_mpz_t(), p.get_den().get_mpz_t());
        frac = p - BigRational(a);
        BigInt h1 = a * h0 + hm1;
        BigInt k1 = a * k0 + km1;
        if (k1 > den_bound) {
            BigInt j = (den_bound - km1) / k0;
            BigRational conv(h0, k0);
            conv.canonicalize();
            if (j >= 1) {
                BigRational semi(j * h0 + hm1, j * k0 + km1);
                semi.canonicalize();
                BigRational dc = abs(x - conv), ds = abs(x - semi);
                if (ds < dc) return semi;
                if (ds == dc && semi.get_den() < conv.get_den()) return semi;
            }
            return conv;
        }
        hm1 = h0;
        h0 = h1;
        km1 = k0;
        k0 = k1;
    }
    BigRational conv(h0, k0);
    conv.canonicalize();
    return conv;
}

std::vector<BigRational> rational_round(std::span<const double> xs, long long den_bound) {
    std::vector<BigRational> out;
    out.reserve(xs.size());
    BigInt h(static_cast<long>(den_bound));
    for (double x : xs) out.push_back(rational_round(rational_from_double(x), h));
    return out;
}

} // namespace wrest
