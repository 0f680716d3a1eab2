#pragma once

// Reference implementations used only by tests. Each is written from the
// textbook definition, deliberately slow and independent of the library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline double cosine_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    return std::clamp(1.0 - dot / std::sqrt(na * nb), 0.0, 2.0);
}

/// Sum over ordered pairs i != j of the distance, divided by the set size.
inline double dispersion_loop(const Matrix& vectors) {
    double sum = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = 0; j < vectors.size(); ++j) {
            if (i != j) sum += cosine_distance(vectors[i], vectors[j]);
        }
    }
    return sum / static_cast<double>(vectors.size());
}

/// Flat cluster labels (numbered by first appearance) from naive Ward
/// agglomeration: repeatedly merge the pair of clusters with the smallest
/// Ward distance sqrt(2 na nb / (na + nb)) * |ca - cb| while it is below
/// the threshold. Centroids are recomputed from members at every step.
inline std::vector<int> naive_ward(const Matrix& points, double threshold) {
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < points.size(); ++i) clusters.push_back({i});
    const std::size_t dim = points.empty() ? 0 : points[0].size();
    auto centroid = [&](const std::vector<std::size_t>& members) {
        std::vector<double> c(dim, 0.0);
        for (auto m : members) {
            for (std::size_t d = 0; d < dim; ++d) c[d] += points[m][d];
        }
        for (auto& x : c) x /= static_cast<double>(members.size());
        return c;
    };
    while (clusters.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            const auto ci = centroid(clusters[i]);
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                const auto cj = centroid(clusters[j]);
                double sq = 0.0;
                for (std::size_t d = 0; d < dim; ++d) sq += (ci[d] - cj[d]) * (ci[d] - cj[d]);
                const double na = static_cast<double>(clusters[i].size()), nb = static_cast<double>(clusters[j].size());
                const double w = std::sqrt(2.0 * na * nb / (na + nb) * sq);
                if (w < best) {
                    best = w;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (!(best < threshold)) break;
        clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    std::vector<int> cluster_of(points.size());
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        for (auto m : clusters[c]) cluster_of[m] = static_cast<int>(c);
    }
    std::map<int, int> relabel;
    std::vector<int> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto [it, fresh] = relabel.emplace(cluster_of[i], static_cast<int>(relabel.size()));
        out[i] = it->second;
    }
    return out;
}

/// Continued fraction for the incomplete beta function (modified Lentz).
inline double betacf(double a, double b, double x) {
    const double tiny = 1e-300;
    double c = 1.0, d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 1000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((a + m2 - 1) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return h;
}

/// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(1 - x));
    if (x < (a + 1) / (a + b + 2)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1 - x) / b;
}

/// Two-sided Student t tail probability.
inline double t_two_sided(double t, double df) { return incomplete_beta(df / 2.0, 0.5, df / (df + t * t)); }

struct Welch {
    double t, df, p;
};

inline Welch welch(const std::vector<double>& a, const std::vector<double>& b) {
    auto mean = [](const std::vector<double>& x) {
        double s = 0;
        for (double v : x) s += v;
        return s / static_cast<double>(x.size());
    };
    auto var = [&](const std::vector<double>& x) {
        const double m = mean(x);
        double s = 0;
        for (double v : x) s += (v - m) * (v - m);
        return s / static_cast<double>(x.size() - 1);
    };
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double va = var(a) / na, vb = var(b) / nb;
    const double t = (mean(a) - mean(b)) / std::sqrt(va + vb);
    const double df = (va + vb) * (va + vb) / (va * va / (na - 1) + vb * vb / (nb - 1));
    return {t, df, t_two_sided(t, df)};
}

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(Matrix a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (std::abs(a[piv][col]) < 1e-14) throw std::runtime_error("singular system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

inline std::vector<double> zscore(const std::vector<double>& x) {
    double m = 0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    double ss = 0;
    for (double v : x) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / static_cast<double>(x.size() - 1));
    std::vector<double> out;
    for (double v : x) out.push_back((v - m) / sd);
    return out;
}

/// Standardized OLS coefficients (predictors only) via the normal
/// equations X'X b = X'y with an intercept column.
inline std::vector<double> standardized_ols(const Matrix& columns, const std::vector<double>& y) {
    const std::size_t n = y.size(), p = columns.size() + 1;
    Matrix x(n, std::vector<double>(p, 1.0));
    for (std::size_t j = 0; j + 1 < p; ++j) {
        const auto z = zscore(columns[j]);
        for (std::size_t i = 0; i < n; ++i) x[i][j + 1] = z[i];
    }
    const auto zy = zscore(y);
    Matrix xtx(p, std::vector<double>(p, 0.0));
    std::vector<double> xty(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t r = 0; r < p; ++r) {
            xty[r] += x[i][r] * zy[i];
            for (std::size_t c = 0; c < p; ++c) xtx[r][c] += x[i][r] * x[i][c];
        }
    }
    auto beta = solve(xtx, xty);
    beta.erase(beta.begin());
    return beta;
}

/// ICC(2,k) from two-way ANOVA sums of squares over a complete
/// stories x judges matrix.
inline double icc2k(const Matrix& m) {
    const std::size_t n = m.size(), k = m[0].size();
    double grand = 0;
    for (const auto& row : m) {
        for (double v : row) grand += v;
    }
    grand /= static_cast<double>(n * k);
    double ssr = 0, ssc = 0, sst = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double rm = 0;
        for (double v : m[i]) rm += v;
        rm /= static_cast<double>(k);
        ssr += static_cast<double>(k) * (rm - grand) * (rm - grand);
    }
    for (std::size_t j = 0; j < k; ++j) {
        double cm = 0;
        for (std::size_t i = 0; i < n; ++i) cm += m[i][j];
        cm /= static_cast<double>(n);
        ssc += static_cast<double>(n) * (cm - grand) * (cm - grand);
    }
    for (const auto& row : m) {
        for (double v : row) sst += (v - grand) * (v - grand);
    }
    const double sse = sst - ssr - ssc;
    const double msr = ssr / static_cast<double>(n - 1);
    const double msc = ssc / static_cast<double>(k - 1);
    const double mse = sse / static_cast<double>((n - 1) * (k - 1));
    return (msr - mse) / (msr + (msc - mse) / static_cast<double>(n));
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

}  // namespace oracle
