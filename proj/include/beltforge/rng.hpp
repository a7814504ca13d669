#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace beltforge {

// Seeded random stream. All bounded draws are derived from raw mt19937_64
// output with explicit arithmetic so that a given seed produces the same
// sequence on every platform (std::uniform_int_distribution does not
// guarantee that).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform on [0, n), rejection-sampled to avoid modulo bias.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
        const std::uint64_t limit = (-n) % n;  // 2^64 mod n
        for (;;) {
            std::uint64_t r = gen_();
            if (r >= limit) return r % n;
        }
    }

    // Uniform on [lo, hi], both ends inclusive.
    int uniform_int(int lo, int hi) {
        if (lo > hi) throw std::invalid_argument("Rng::uniform_int: empty range");
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi) - lo + 1));
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform_double() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform_double() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

    // k distinct values from [0, n), by partial Fisher-Yates.
    std::vector<int> sample_indices(int n, int k) {
        if (k < 0 || k > n) throw std::invalid_argument("Rng::sample_indices: k out of range");
        std::vector<int> pool(n);
        for (int i = 0; i < n; ++i) pool[i] = i;
        std::vector<int> out;
        out.reserve(k);
        for (int i = 0; i < k; ++i) {
            std::uint64_t j = i + below(static_cast<std::uint64_t>(n - i));
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace beltforge
