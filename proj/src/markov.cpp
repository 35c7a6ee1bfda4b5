#include "chopf/markov.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace chopf {

QMatrix QMatrix::identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1;
    }
    return m;
}

Rational QMatrix::trace() const {
    Rational t = 0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
        t += (*this)(i, i);
    }
    return t;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols_ != b.rows_) {
        throw Error("matrix shape mismatch in product");
    }
    QMatrix out(a.rows_, b.cols_);
    Rational tmp;
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Rational& aik = a(i, k);
            if (aik == 0) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols_; ++j) {
                tmp = aik * b(k, j);
                out(i, j) += tmp;
            }
        }
    }
    return out;
}

MarkovChain::MarkovChain(Alphabet alphabet, std::vector<Word> states, QMatrix transition,
                         std::optional<unsigned> arity)
    : alphabet_(std::move(alphabet)), states_(std::move(states)), P_(std::move(transition)), arity_(arity) {
    const std::size_t n = states_.size();
    if (n == 0 || P_.rows() != n || P_.cols() != n) {
        throw Error("transition matrix must be square over the " + std::to_string(n) + " states");
    }
    for (std::size_t i = 0; i < n; ++i) {
        Rational sum = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (P_(i, j) < 0) {
                throw Error("negative transition probability in row " + std::to_string(i));
            }
            sum += P_(i, j);
        }
        if (sum != 1) {
            throw Error("row " + std::to_string(i) + " sums to " + sum.get_str() + ", not 1");
        }
    }
}

bool MarkovChain::doubly_stochastic() const {
    for (std::size_t j = 0; j < size(); ++j) {
        Rational sum = 0;
        for (std::size_t i = 0; i < size(); ++i) {
            sum += P_(i, j);
        }
        if (sum != 1) {
            return false;
        }
    }
    return true;
}

Elem hopf_power(std::size_t a, const HopfStructure& h, const Word& w) {
    if (a == 0) {
        throw Error("Hopf power needs a >= 1");
    }
    return h.multiply(h.iterated_coproduct(w, a));
}

Elem hopf_power(std::size_t a, const HopfStructure& h, const Elem& x) {
    Elem out(h.alphabet());
    for (const auto& [w, c] : x.terms()) {
        out.add_scaled(hopf_power(a, h, w), c);
    }
    return out;
}

MarkovChain riffle_chain(std::size_t cards, unsigned arity) {
    if (cards < 2 || cards > kMaxDeck) {
        throw DeckTooLarge(cards);
    }
    if (arity < 2) {
        throw Error("shuffle arity must be at least 2");
    }
    const Alphabet alphabet(std::string("abcdef").substr(0, cards));
    const HopfStructure h(HopfKind::ShuffleDeconcat, alphabet, std::max(cards, kDefaultMaxDegree));

    std::vector<std::uint8_t> perm(cards);
    std::iota(perm.begin(), perm.end(), std::uint8_t{0});
    std::vector<Word> states;
    do {
        states.emplace_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::map<Word, std::size_t> index;
    for (std::size_t i = 0; i < states.size(); ++i) {
        index.emplace(states[i], i);
    }
    Rational scale = 1;
    for (std::size_t i = 0; i < cards; ++i) {
        scale *= arity;
    }

    QMatrix P(states.size(), states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (const auto& [w, c] : hopf_power(arity, h, states[i]).terms()) {
            P(i, index.at(w)) = c / scale;
        }
    }
    return MarkovChain(alphabet, std::move(states), std::move(P), arity);
}

Polynomial characteristic_polynomial(const QMatrix& m) {
    if (m.rows() != m.cols()) {
        throw Error("characteristic polynomial needs a square matrix");
    }
    const std::size_t n = m.rows();
    QMatrix H = m;
    Rational t;

    // Similarity transforms to upper Hessenberg form.
    for (std::size_t c = 0; c + 2 < n; ++c) {
        std::size_t pivot = c + 1;
        while (pivot < n && H(pivot, c) == 0) {
            ++pivot;
        }
        if (pivot == n) {
            continue;
        }
        if (pivot != c + 1) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(H(pivot, j), H(c + 1, j));
            }
            for (std::size_t i = 0; i < n; ++i) {
                std::swap(H(i, pivot), H(i, c + 1));
            }
        }
        for (std::size_t k = c + 2; k < n; ++k) {
            if (H(k, c) == 0) {
                continue;
            }
            const Rational f = H(k, c) / H(c + 1, c);
            // row_k -= f row_{c+1}, then col_{c+1} += f col_k
            for (std::size_t j = 0; j < n; ++j) {
                t = f * H(c + 1, j);
                H(k, j) -= t;
            }
            for (std::size_t i = 0; i < n; ++i) {
                t = f * H(i, k);
                H(i, c + 1) += t;
            }
        }
    }

    // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_im (prod_{j=i+1..m} h_{j,j-1}) p_{i-1}
    std::vector<Polynomial> p(n + 1);
    p[0] = {Rational(1)};
    for (std::size_t m1 = 1; m1 <= n; ++m1) {
        const std::size_t mm = m1 - 1;
        Polynomial next(m1 + 1);
        for (std::size_t d = 0; d < p[m1 - 1].size(); ++d) {
            next[d + 1] += p[m1 - 1][d];
            t = H(mm, mm) * p[m1 - 1][d];
            next[d] -= t;
        }
        Rational sub = 1;
        for (std::size_t i1 = m1 - 1; i1 >= 1; --i1) {
            const std::size_t ii = i1 - 1;
            sub *= H(ii + 1, ii);
            if (sub == 0) {
                break;
            }
            const Rational coef = H(ii, mm) * sub;
            if (coef != 0) {
                for (std::size_t d = 0; d < p[i1 - 1].size(); ++d) {
                    t = coef * p[i1 - 1][d];
                    next[d] -= t;
                }
            }
        }
        p[m1] = std::move(next);
    }
    return p[n];
}

Rational evaluate(const Polynomial& p, const Rational& x) {
    Rational acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        acc *= x;
        acc += *it;
    }
    return acc;
}

namespace {

// Divides p by (x - r), assuming r is a root.
Polynomial deflate(const Polynomial& p, const Rational& r) {
    Polynomial q(p.size() - 1);
    Rational carry = 0;
    for (std::size_t d = p.size() - 1; d >= 1; --d) {
        carry = p[d] + carry * r;
        q[d - 1] = carry;
    }
    return q;
}

// Smallest b with b^k == d, or d itself.
mpz_class primitive_base(const mpz_class& d) {
    const auto bits = mpz_sizeinbase(d.get_mpz_t(), 2);
    for (unsigned long k = bits; k >= 2; --k) {
        mpz_class root;
        if (mpz_root(root.get_mpz_t(), d.get_mpz_t(), k) != 0) {
            return primitive_base(root);
        }
    }
    return d;
}

std::optional<mpz_class> common_base(const QMatrix& P, std::size_t& max_exponent) {
    std::optional<mpz_class> base;
    max_exponent = 0;
    for (std::size_t i = 0; i < P.rows(); ++i) {
        for (std::size_t j = 0; j < P.cols(); ++j) {
            const mpz_class& d = P(i, j).get_den();
            if (d == 1) {
                continue;
            }
            const mpz_class b = primitive_base(d);
            if (base && *base != b) {
                return std::nullopt;
            }
            base = b;
            std::size_t k = 0;
            for (mpz_class x = d; x > 1; x /= b) {
                ++k;
            }
            max_exponent = std::max(max_exponent, k);
        }
    }
    return base;
}

} // namespace

std::optional<std::vector<Rational>> stationary_exact(const MarkovChain& chain) {
    const std::size_t n = chain.size();
    const QMatrix& P = chain.matrix();
    // Rows 0..n-1: (P^T - I) pi = 0; row n: sum(pi) = 1. Augmented column n.
    std::vector<std::vector<Rational>> a(n + 1, std::vector<Rational>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a[i][j] = P(j, i);
        }
        a[i][i] -= 1;
    }
    for (std::size_t j = 0; j <= n; ++j) {
        a[n][j] = 1;
    }
    std::size_t row = 0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = row;
        while (pivot <= n && a[pivot][col] == 0) {
            ++pivot;
        }
        if (pivot > n) {
            return std::nullopt; // free variable: the stationary distribution is not unique
        }
        std::swap(a[pivot], a[row]);
        const Rational inv = 1 / a[row][col];
        for (std::size_t j = col; j <= n; ++j) {
            a[row][j] *= inv;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == row || a[i][col] == 0) {
                continue;
            }
            const Rational f = a[i][col];
            for (std::size_t j = col; j <= n; ++j) {
                a[i][j] -= f * a[row][j];
            }
        }
        ++row;
    }
    std::vector<Rational> pi(n);
    for (std::size_t i = 0; i < n; ++i) {
        pi[i] = a[i][n];
    }
    return pi;
}

Spectrum spectrum_exact(const MarkovChain& chain) {
    Spectrum s;
    s.characteristic_polynomial = characteristic_polynomial(chain.matrix());
    s.stationary = stationary_exact(chain);

    std::set<Rational> candidates{Rational(1), Rational(0), Rational(-1)};
    std::size_t max_exponent = 0;
    std::vector<mpz_class> bases;
    if (auto b = common_base(chain.matrix(), max_exponent)) {
        bases.push_back(*b);
    }
    if (chain.arity()) {
        bases.emplace_back(*chain.arity());
    }
    const std::size_t top = chain.size() + max_exponent;
    for (const auto& b : bases) {
        Rational x = 1;
        for (std::size_t i = 1; i <= top; ++i) {
            x /= b;
            candidates.insert(x);
        }
    }

    Polynomial rest = s.characteristic_polynomial;
    for (auto it = candidates.rbegin(); it != candidates.rend(); ++it) {
        std::size_t mult = 0;
        while (rest.size() > 1 && evaluate(rest, *it) == 0) {
            rest = deflate(rest, *it);
            ++mult;
        }
        if (mult > 0) {
            s.eigenvalues.emplace(*it, mult);
        }
    }
    s.residual_factor = std::move(rest);
    return s;
}

MarkovChain repeated_square(const MarkovChain& chain, std::size_t squarings) {
    QMatrix P = chain.matrix();
    for (std::size_t k = 0; k < squarings; ++k) {
        P = P * P;
    }
    return MarkovChain(chain.alphabet(), chain.states(), std::move(P), chain.arity());
}

SquaringResult stationary_by_squaring(const MarkovChain& chain, double tolerance, std::size_t budget) {
    const std::size_t n = chain.size();
    std::vector<double> M(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            M[i * n + j] = to_double(chain.matrix()(i, j));
        }
    }
    auto spread = [&] {
        double worst = 0;
        for (std::size_t j = 0; j < n; ++j) {
            double lo = M[j];
            double hi = M[j];
            for (std::size_t i = 1; i < n; ++i) {
                lo = std::min(lo, M[i * n + j]);
                hi = std::max(hi, M[i * n + j]);
            }
            worst = std::max(worst, hi - lo);
        }
        return worst;
    };
    std::vector<double> next(n * n);
    for (std::size_t k = 0;; ++k) {
        if (const double sp = spread(); sp < tolerance) {
            return {std::vector<double>(M.begin(), M.begin() + static_cast<std::ptrdiff_t>(n)), k, sp};
        }
        if (k == budget) {
            throw NoConvergence(budget);
        }
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t l = 0; l < n; ++l) {
                const double m = M[i * n + l];
                for (std::size_t j = 0; j < n; ++j) {
                    next[i * n + j] += m * M[l * n + j];
                }
            }
        }
        M.swap(next);
    }
}

} // namespace chopf
