#include "asgem/wigner.hpp"

#include "asgem/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace asgem {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Prime-factorized integers. A value is a vector of exponents over the
// first primes; negative exponents are denominators.

class PrimeTable {
public:
    const std::vector<int>& primes_up_to(int n)
    {
        if (n > limit_) {
            limit_ = std::max(n, 2 * limit_);
            std::vector<bool> composite(limit_ + 1, false);
            primes_.clear();
            for (int i = 2; i <= limit_; ++i) {
                if (composite[i])
                    continue;
                primes_.push_back(i);
                for (long long k = 1LL * i * i; k <= limit_; k += i)
                    composite[k] = true;
            }
        }
        return primes_;
    }

private:
    int limit_ = 0;
    std::vector<int> primes_;
};

using Exponents = std::vector<int>;

// Adds sign * log_p(n!) for every prime p (Legendre's formula).
void accumulate_factorial(Exponents& e, const std::vector<int>& primes, int n, int sign)
{
    for (std::size_t i = 0; i < primes.size() && primes[i] <= n; ++i) {
        int count = 0;
        for (long long pk = primes[i]; pk <= n; pk *= primes[i])
            count += static_cast<int>(n / pk);
        e[i] += sign * count;
    }
}

// Racah-type sum
//
//   value = phase * sqrt(prod p^prefactor) * sum_k sign_k * prod p^term_k
//
// evaluated exactly. All terms share the common factor prod p^min_k(term_k),
// leaving integer residuals that are summed in cpp_int.
double evaluate_sum(const std::vector<int>& primes, const Exponents& prefactor,
                    const std::vector<Exponents>& terms, const std::vector<int>& signs, int phase)
{
    if (terms.empty())
        return 0.0;
    const std::size_t np = primes.size();
    Exponents common(np);
    for (std::size_t i = 0; i < np; ++i) {
        int lo = terms.front()[i];
        for (const auto& t : terms)
            lo = std::min(lo, t[i]);
        common[i] = lo;
    }

    cpp_int sum = 0;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        cpp_int residual = 1;
        for (std::size_t i = 0; i < np; ++i) {
            const int d = terms[k][i] - common[i];
            if (d > 0)
                residual *= boost::multiprecision::pow(cpp_int(primes[i]), static_cast<unsigned>(d));
        }
        if (signs[k] < 0)
            sum -= residual;
        else
            sum += residual;
    }
    if (sum == 0)
        return 0.0;

    // value^2 = sum^2 * prod p^(2 common + prefactor)
    cpp_int num = sum * sum;
    cpp_int den = 1;
    for (std::size_t i = 0; i < np; ++i) {
        const int d = 2 * common[i] + prefactor[i];
        if (d > 0)
            num *= boost::multiprecision::pow(cpp_int(primes[i]), static_cast<unsigned>(d));
        else if (d < 0)
            den *= boost::multiprecision::pow(cpp_int(primes[i]), static_cast<unsigned>(-d));
    }
    const double magnitude = std::sqrt(static_cast<double>(cpp_rational(num, den)));
    const int sign = (sum < 0 ? -1 : 1) * phase;
    return sign * magnitude;
}

// Adds the triangle coefficient Delta(abc) = (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!
// with arguments given as twice-values.
void accumulate_delta(Exponents& e, const std::vector<int>& primes, int ta, int tb, int tc)
{
    accumulate_factorial(e, primes, (ta + tb - tc) / 2, +1);
    accumulate_factorial(e, primes, (ta - tb + tc) / 2, +1);
    accumulate_factorial(e, primes, (-ta + tb + tc) / 2, +1);
    accumulate_factorial(e, primes, (ta + tb + tc) / 2 + 1, -1);
}

double racah_3j(int j1, int j2, int j3, int m1, int m2, int m3, PrimeTable& table)
{
    // All arguments are twice-values here; validity and selection rules
    // have already been checked.
    const int nmax = (j1 + j2 + j3) / 2 + 1;
    const auto& primes = table.primes_up_to(std::max(nmax, 2));
    const std::size_t np = primes.size();

    Exponents prefactor(np, 0);
    accumulate_delta(prefactor, primes, j1, j2, j3);
    accumulate_factorial(prefactor, primes, (j1 + m1) / 2, +1);
    accumulate_factorial(prefactor, primes, (j1 - m1) / 2, +1);
    accumulate_factorial(prefactor, primes, (j2 + m2) / 2, +1);
    accumulate_factorial(prefactor, primes, (j2 - m2) / 2, +1);
    accumulate_factorial(prefactor, primes, (j3 + m3) / 2, +1);
    accumulate_factorial(prefactor, primes, (j3 - m3) / 2, +1);

    const int kmin = std::max({0, (j2 - j3 - m1) / 2, (j1 - j3 + m2) / 2});
    const int kmax = std::min({(j1 + j2 - j3) / 2, (j1 - m1) / 2, (j2 + m2) / 2});

    std::vector<Exponents> terms;
    std::vector<int> signs;
    for (int k = kmin; k <= kmax; ++k) {
        Exponents t(np, 0);
        accumulate_factorial(t, primes, k, -1);
        accumulate_factorial(t, primes, (j1 + j2 - j3) / 2 - k, -1);
        accumulate_factorial(t, primes, (j1 - m1) / 2 - k, -1);
        accumulate_factorial(t, primes, (j2 + m2) / 2 - k, -1);
        accumulate_factorial(t, primes, (j3 - j2 + m1) / 2 + k, -1);
        accumulate_factorial(t, primes, (j3 - j1 - m2) / 2 + k, -1);
        terms.push_back(std::move(t));
        signs.push_back(k % 2 == 0 ? 1 : -1);
    }

    // (-1)^(j1 - j2 - m3)
    const int phase = (((j1 - j2 - m3) / 2) % 2 == 0) ? 1 : -1;
    return evaluate_sum(primes, prefactor, terms, signs, phase);
}

double racah_6j(const std::array<int, 6>& j, PrimeTable& table)
{
    const int a1 = (j[0] + j[1] + j[2]) / 2;
    const int a2 = (j[0] + j[4] + j[5]) / 2;
    const int a3 = (j[3] + j[1] + j[5]) / 2;
    const int a4 = (j[3] + j[4] + j[2]) / 2;
    const int b1 = (j[0] + j[1] + j[3] + j[4]) / 2;
    const int b2 = (j[1] + j[2] + j[4] + j[5]) / 2;
    const int b3 = (j[2] + j[0] + j[5] + j[3]) / 2;

    const int tmin = std::max({a1, a2, a3, a4});
    const int tmax = std::min({b1, b2, b3});
    const auto& primes = table.primes_up_to(std::max(tmax + 2, 2));
    const std::size_t np = primes.size();

    Exponents prefactor(np, 0);
    accumulate_delta(prefactor, primes, j[0], j[1], j[2]);
    accumulate_delta(prefactor, primes, j[0], j[4], j[5]);
    accumulate_delta(prefactor, primes, j[3], j[1], j[5]);
    accumulate_delta(prefactor, primes, j[3], j[4], j[2]);

    std::vector<Exponents> terms;
    std::vector<int> signs;
    for (int t = tmin; t <= tmax; ++t) {
        Exponents e(np, 0);
        accumulate_factorial(e, primes, t + 1, +1);
        for (int a : {a1, a2, a3, a4})
            accumulate_factorial(e, primes, t - a, -1);
        for (int b : {b1, b2, b3})
            accumulate_factorial(e, primes, b - t, -1);
        terms.push_back(std::move(e));
        signs.push_back(t % 2 == 0 ? 1 : -1);
    }
    return evaluate_sum(primes, prefactor, terms, signs, 1);
}

// ---------------------------------------------------------------------------
// Memoization keyed by the canonical representative of each symmetry class.

struct Key {
    std::array<int, 7> v; // v[0] tags 3j (3) or 6j (6)
    bool operator==(const Key&) const = default;
};

struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept
    {
        std::size_t h = 1469598103934665603ULL;
        for (int x : k.v) {
            h ^= static_cast<std::size_t>(x + 1000);
            h *= 1099511628211ULL;
        }
        return h;
    }
};

class SymbolCache {
public:
    template <class Compute>
    double get(const Key& key, Compute&& compute)
    {
        {
            std::shared_lock lock(mutex_);
            if (auto it = values_.find(key); it != values_.end())
                return it->second;
        }
        double value;
        {
            std::lock_guard lock(table_mutex_);
            value = compute(primes_);
        }
        std::unique_lock lock(mutex_);
        values_.emplace(key, value);
        return value;
    }

    std::size_t size() const
    {
        std::shared_lock lock(mutex_);
        return values_.size();
    }

    void clear()
    {
        std::unique_lock lock(mutex_);
        values_.clear();
    }

private:
    mutable std::shared_mutex mutex_;
    std::unordered_map<Key, double, KeyHash> values_;
    std::mutex table_mutex_;
    PrimeTable primes_;
};

SymbolCache& cache()
{
    static SymbolCache instance;
    return instance;
}

} // namespace

double wigner_3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3)
{
    const std::array<HalfInt, 3> js{j1, j2, j3};
    const std::array<HalfInt, 3> ms{m1, m2, m3};
    for (int i = 0; i < 3; ++i) {
        if (!is_valid_projection(js[i], ms[i]))
            throw DomainError("wigner_3j: invalid pair j=" + js[i].str() + " m=" + ms[i].str());
    }
    if (m1.twice() + m2.twice() + m3.twice() != 0 || !satisfies_triangle(j1, j2, j3))
        return 0.0;

    // Column permutations and m -> -m; odd operations pick up (-1)^(j1+j2+j3).
    const int jsum_parity = ((j1.twice() + j2.twice() + j3.twice()) / 2) % 2;
    static constexpr std::array<std::array<int, 3>, 6> perms{
        {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}}};
    std::array<int, 7> best{};
    bool have_best = false;
    int best_odd = 0;
    for (int p = 0; p < 6; ++p) {
        for (int flip = 0; flip < 2; ++flip) {
            std::array<int, 7> k{3};
            for (int c = 0; c < 3; ++c) {
                k[1 + c] = js[perms[p][c]].twice();
                k[4 + c] = (flip ? -1 : 1) * ms[perms[p][c]].twice();
            }
            const int odd = ((p >= 3) ? 1 : 0) ^ flip;
            if (!have_best || k < best) {
                best = k;
                best_odd = odd;
                have_best = true;
            }
        }
    }
    const double canonical = cache().get(Key{best}, [&](PrimeTable& table) {
        return racah_3j(best[1], best[2], best[3], best[4], best[5], best[6], table);
    });
    const bool negate = best_odd && jsum_parity;
    return negate ? -canonical : canonical;
}

double wigner_6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6)
{
    const std::array<int, 6> j{j1.twice(), j2.twice(), j3.twice(), j4.twice(), j5.twice(), j6.twice()};
    for (int v : j) {
        if (v < 0)
            throw DomainError("wigner_6j: negative angular momentum");
    }
    auto tri = [](int a, int b, int c) {
        return satisfies_triangle(HalfInt::from_twice(a), HalfInt::from_twice(b), HalfInt::from_twice(c));
    };
    if (!tri(j[0], j[1], j[2]) || !tri(j[0], j[4], j[5]) || !tri(j[3], j[1], j[5]) || !tri(j[3], j[4], j[2]))
        return 0.0;

    // Columns are (upper, lower) pairs; any column permutation and swapping
    // upper/lower in two columns leave the symbol unchanged.
    static constexpr std::array<std::array<int, 3>, 6> perms{
        {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}}};
    static constexpr std::array<std::array<bool, 3>, 4> swaps{
        {{false, false, false}, {true, true, false}, {true, false, true}, {false, true, true}}};
    std::array<int, 7> best{};
    bool have_best = false;
    for (const auto& p : perms) {
        for (const auto& s : swaps) {
            std::array<int, 7> k{6};
            for (int c = 0; c < 3; ++c) {
                const int up = j[p[c]], lo = j[p[c] + 3];
                k[1 + c] = s[c] ? lo : up;
                k[4 + c] = s[c] ? up : lo;
            }
            if (!have_best || k < best) {
                best = k;
                have_best = true;
            }
        }
    }
    return cache().get(Key{best}, [&](PrimeTable& table) {
        return racah_6j({best[1], best[2], best[3], best[4], best[5], best[6]}, table);
    });
}

std::size_t wigner_cache_size() { return cache().size(); }

void clear_wigner_cache() { cache().clear(); }

} // namespace asgem
