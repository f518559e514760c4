#pragma once
// Shared pieces for the classifiers: a flat row-major matrix, a portable
// deterministic RNG wrapper, and the z-score standardizer.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "codeneed/errors.hpp"

namespace codeneed::models {

struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data; // row-major

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data.data() + r * cols, cols);
    }
    std::span<double> row(std::size_t r) {
        return std::span<double>(data.data() + r * cols, cols);
    }

    static Matrix from_rows(const std::vector<std::vector<double>>& rows_in) {
        Matrix m(rows_in.size(), rows_in.empty() ? 0 : rows_in[0].size());
        for (std::size_t r = 0; r < rows_in.size(); ++r)
            for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = rows_in[r][c];
        return m;
    }
};

// mt19937_64 with explicit mappings; std::*_distribution is not pinned across
// standard libraries, these are.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t raw() { return gen_(); }

    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::size_t index(std::size_t n) { return n ? static_cast<std::size_t>(gen_() % n) : 0; }

    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
    }

private:
    std::mt19937_64 gen_;
};

struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev; // population convention; 0 marks a constant column

    static Standardizer fit(const Matrix& X) {
        if (X.rows == 0) throw StatsError("standardize_fit: empty matrix");
        Standardizer s;
        s.mean.assign(X.cols, 0.0);
        s.stddev.assign(X.cols, 0.0);
        for (std::size_t r = 0; r < X.rows; ++r)
            for (std::size_t c = 0; c < X.cols; ++c) s.mean[c] += X.at(r, c);
        for (double& m : s.mean) m /= static_cast<double>(X.rows);
        for (std::size_t r = 0; r < X.rows; ++r) {
            for (std::size_t c = 0; c < X.cols; ++c) {
                double d = X.at(r, c) - s.mean[c];
                s.stddev[c] += d * d;
            }
        }
        for (double& v : s.stddev) v = std::sqrt(v / static_cast<double>(X.rows));
        return s;
    }

    void apply_row(std::span<const double> in, std::span<double> out) const {
        for (std::size_t c = 0; c < in.size(); ++c) {
            out[c] = stddev[c] > 0.0 ? (in[c] - mean[c]) / stddev[c] : 0.0;
        }
    }

    Matrix apply(const Matrix& X) const {
        if (X.cols != mean.size()) throw StatsError("standardize_apply: dimension mismatch");
        Matrix out(X.rows, X.cols);
        for (std::size_t r = 0; r < X.rows; ++r) apply_row(X.row(r), out.row(r));
        return out;
    }
};

struct Prediction {
    bool needs_code = false;
    double score = 0.0; // in [0, 1]; label == (score >= 0.5)
};

inline double sigmoid(double z) {
    if (z >= 0.0) {
        double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    double e = std::exp(z);
    return e / (1.0 + e);
}

inline void check_training_input(const Matrix& X, const std::vector<int>& y) {
    if (X.rows != y.size()) throw StatsError("train: |X| != |y|");
    if (X.rows < 2) throw StatsError("train: need at least 2 samples");
    bool has0 = false, has1 = false;
    for (int label : y) (label ? has1 : has0) = true;
    if (!has0 || !has1) throw StatsError("train: both classes must be present");
}

} // namespace codeneed::models
