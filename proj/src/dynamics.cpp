#include "cpinv/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace cpinv::dynamics {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

unsigned resolve_workers(unsigned workers, std::size_t tasks)
{
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(tasks, 1)));
}

// Runs task(i) for i in [0, tasks) on a static round-robin split.
template <typename Task>
void parallel_for(std::size_t tasks, unsigned workers, Task task)
{
    workers = resolve_workers(workers, tasks);
    if (workers == 1) {
        for (std::size_t i = 0; i < tasks; ++i)
            task(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([=, &task] {
            for (std::size_t i = w; i < tasks; i += workers)
                task(i);
        });
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

// Determinant of a dense n x n matrix (row-major) by partial-pivot LU.
double dense_determinant(std::vector<double> a, std::size_t n)
{
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i * n + k]) > std::abs(a[p * n + k]))
                p = i;
        if (a[p * n + k] == 0.0)
            return 0.0;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a[k * n + j], a[p * n + j]);
            det = -det;
        }
        det *= a[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i * n + k] / a[k * n + k];
            for (std::size_t j = k; j < n; ++j)
                a[i * n + j] -= f * a[k * n + j];
        }
    }
    return det;
}

// Orthonormal basis of the tangent space at unit x, positively oriented:
// det[x, v_1, ..., v_n] > 0.
std::vector<std::vector<double>> tangent_frame(std::span<const double> x)
{
    const std::size_t m = x.size();
    std::vector<std::vector<double>> frame;
    frame.reserve(m - 1);
    // Drop the standard basis vector most aligned with x.
    std::size_t skip = 0;
    for (std::size_t i = 1; i < m; ++i)
        if (std::abs(x[i]) > std::abs(x[skip]))
            skip = i;
    for (std::size_t e = 0; e < m; ++e) {
        if (e == skip)
            continue;
        std::vector<double> v(m, 0.0);
        v[e] = 1.0;
        // Two passes of Gram-Schmidt for stability.
        for (int pass = 0; pass < 2; ++pass) {
            const double px = dot(v, x);
            for (std::size_t i = 0; i < m; ++i)
                v[i] -= px * x[i];
            for (const auto& u : frame) {
                const double pu = dot(v, u);
                for (std::size_t i = 0; i < m; ++i)
                    v[i] -= pu * u[i];
            }
        }
        const double nv = std::sqrt(dot(v, v));
        for (double& c : v)
            c /= nv;
        frame.push_back(std::move(v));
    }
    std::vector<double> mat(m * m);
    for (std::size_t i = 0; i < m; ++i) {
        mat[i * m] = x[i];
        for (std::size_t k = 0; k + 1 < m; ++k)
            mat[i * m + k + 1] = frame[k][i];
    }
    if (dense_determinant(mat, m) < 0.0)
        for (double& c : frame.front())
            c = -c;
    return frame;
}

} // namespace

// ---------------------------------------------------------------------------
// Points and maps
// ---------------------------------------------------------------------------

double SpherePoint::norm() const
{
    return std::sqrt(dot(coords, coords));
}

void SpherePoint::renormalize_if_drifted()
{
    const double n = norm();
    if (std::abs(n - 1.0) > kTolerances.renormalize_drift)
        for (double& c : coords)
            c /= n;
}

SpherePoint SpherePoint::north_pole(int n)
{
    SpherePoint p;
    p.coords.assign(static_cast<std::size_t>(n) + 1, 0.0);
    p.coords[0] = 1.0;
    return p;
}

SpherePoint SpherePoint::random(int n, CounterRng& rng)
{
    SpherePoint p;
    p.coords.resize(static_cast<std::size_t>(n) + 1);
    double nn = 0.0;
    do {
        for (double& c : p.coords)
            c = rng.normal();
        nn = std::sqrt(dot(p.coords, p.coords));
    } while (nn < 1e-8);
    for (double& c : p.coords)
        c /= nn;
    return p;
}

void ProductPoint::validate() const
{
    auto check = [](const SpherePoint& p, int n, const char* name) {
        if (p.dim() != n)
            throw std::invalid_argument(std::string(name) + ": expected " + std::to_string(n + 1) +
                                        " coordinates, got " + std::to_string(p.coords.size()));
        const double drift = std::abs(p.norm() - 1.0);
        if (!(drift <= kTolerances.unit_norm))
            throw std::invalid_argument(std::string(name) + ": not a unit vector (|norm - 1| = " +
                                        std::to_string(drift) + ")");
    };
    check(s3, 3, "s3");
    check(s6, 6, "s6");
    check(s8, 8, "s8");
}

ProductPoint ProductPoint::random(CounterRng& rng)
{
    ProductPoint x;
    x.s3 = SpherePoint::random(3, rng);
    x.s6 = SpherePoint::random(6, rng);
    x.s8 = SpherePoint::random(8, rng);
    return x;
}

void DynamicsMap::validate() const
{
    if (!(t >= 0.0 && t < 1.0))
        throw std::invalid_argument("t: rotation parameter must lie in [0, 1), got " + std::to_string(t));
}

DynamicsMap compose(const DynamicsMap& outer, const DynamicsMap& inner)
{
    double t = outer.t + inner.t;
    if (t >= 1.0)
        t -= 1.0;
    return {t, outer.apply_p6 != inner.apply_p6, outer.apply_p8 != inner.apply_p8};
}

namespace {

void rotate_s3(double t, std::span<const double> in, std::span<double> out)
{
    const double c = std::cos(kTwoPi * t);
    const double s = std::sin(kTwoPi * t);
    const double re2 = in[0], im2 = in[1], re3 = in[2], im3 = in[3];
    out[0] = c * re2 - s * im2;
    out[1] = s * re2 + c * im2;
    out[2] = c * re3 - s * im3;
    out[3] = s * re3 + c * im3;
}

} // namespace

ProductPoint apply_map(const DynamicsMap& phi, const ProductPoint& x)
{
    phi.validate();
    x.validate();
    ProductPoint y = x;
    rotate_s3(phi.t, x.s3.coords, y.s3.coords);
    if (phi.apply_p6)
        for (double& c : y.s6.coords)
            c = -c;
    if (phi.apply_p8)
        for (double& c : y.s8.coords)
            c = -c;
    y.s3.renormalize_if_drifted();
    return y;
}

int sphere_dim(SphereFactor f)
{
    switch (f) {
    case SphereFactor::s3:
        return 3;
    case SphereFactor::s6:
        return 6;
    case SphereFactor::s8:
        return 8;
    }
    return 0;
}

std::string_view to_string(SphereFactor f)
{
    switch (f) {
    case SphereFactor::s3:
        return "s3";
    case SphereFactor::s6:
        return "s6";
    case SphereFactor::s8:
        return "s8";
    }
    return "?";
}

SphereFactor parse_sphere_factor(std::string_view s)
{
    if (s == "s3")
        return SphereFactor::s3;
    if (s == "s6")
        return SphereFactor::s6;
    if (s == "s8")
        return SphereFactor::s8;
    throw std::invalid_argument("factor: expected s3, s6 or s8, got '" + std::string(s) + "'");
}

SphereMap factor_map(const DynamicsMap& phi, SphereFactor f)
{
    phi.validate();
    SphereMap m;
    m.dim = sphere_dim(f);
    switch (f) {
    case SphereFactor::s3: {
        const double t = phi.t;
        m.apply = [t](std::span<const double> in, std::span<double> out) { rotate_s3(t, in, out); };
        break;
    }
    case SphereFactor::s6:
    case SphereFactor::s8: {
        const bool flip = f == SphereFactor::s6 ? phi.apply_p6 : phi.apply_p8;
        m.apply = [flip](std::span<const double> in, std::span<double> out) {
            for (std::size_t i = 0; i < in.size(); ++i)
                out[i] = flip ? -in[i] : in[i];
        };
        break;
    }
    }
    return m;
}

SphereMap compose(const SphereMap& outer, const SphereMap& inner)
{
    if (outer.dim != inner.dim)
        throw std::invalid_argument("compose: sphere dimensions differ");
    SphereMap m;
    m.dim = outer.dim;
    m.apply = [outer, inner](std::span<const double> in, std::span<double> out) {
        std::vector<double> mid(in.size());
        inner.apply(in, mid);
        outer.apply(mid, out);
    };
    return m;
}

double jacobian_determinant(const SphereMap& f, std::span<const double> x)
{
    const std::size_t m = x.size();
    const double h = kTolerances.jacobian_step;
    const auto frame = tangent_frame(x);

    std::vector<double> y(m), plus(m), minus(m), pp(m), pm(m);
    f.apply(x, y);
    std::vector<double> mat(m * m);
    for (std::size_t i = 0; i < m; ++i)
        mat[i * m] = y[i];
    const double c = std::cos(h), s = std::sin(h);
    for (std::size_t k = 0; k + 1 < m; ++k) {
        for (std::size_t i = 0; i < m; ++i) {
            plus[i] = c * x[i] + s * frame[k][i];
            minus[i] = c * x[i] - s * frame[k][i];
        }
        f.apply(plus, pp);
        f.apply(minus, pm);
        for (std::size_t i = 0; i < m; ++i)
            mat[i * m + k + 1] = (pp[i] - pm[i]) / (2.0 * s);
    }
    return dense_determinant(std::move(mat), m);
}

DegreeEstimate estimate_degree(const SphereMap& f, std::size_t samples, std::uint64_t seed, unsigned workers)
{
    if (samples < kTolerances.min_degree_samples)
        throw std::invalid_argument("samples: need at least " + std::to_string(kTolerances.min_degree_samples) +
                                    ", got " + std::to_string(samples));
    const std::size_t chunks = kTolerances.reduction_chunks;
    std::vector<double> sum(chunks, 0.0), sum_sq(chunks, 0.0);
    parallel_for(chunks, workers, [&](std::size_t c) {
        const std::size_t begin = samples * c / chunks;
        const std::size_t end = samples * (c + 1) / chunks;
        CounterRng rng(seed, c);
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            const SpherePoint x = SpherePoint::random(f.dim, rng);
            const double j = jacobian_determinant(f, x.coords);
            s += j;
            s2 += j * j;
        }
        sum[c] = s;
        sum_sq[c] = s2;
    });

    double total = 0.0, total_sq = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
        total += sum[c];
        total_sq += sum_sq[c];
    }
    const double n = static_cast<double>(samples);
    DegreeEstimate est;
    est.samples = samples;
    est.raw_mean = total / n;
    const double var = std::max(0.0, total_sq / n - est.raw_mean * est.raw_mean);
    const double half = 1.96 * std::sqrt(var / n);
    est.ci_low = est.raw_mean - half;
    est.ci_high = est.raw_mean + half;
    est.degree = std::lround(est.raw_mean);
    if (std::abs(est.raw_mean - static_cast<double>(est.degree)) > kTolerances.degree_rounding)
        throw DegreeEstimationError("degree estimate " + std::to_string(est.raw_mean) +
                                    " is not within " + std::to_string(kTolerances.degree_rounding) +
                                    " of an integer");
    return est;
}

DegreeEstimate estimate_degree(SphereFactor factor, const DynamicsMap& phi, std::size_t samples,
                               std::uint64_t seed, unsigned workers)
{
    return estimate_degree(factor_map(phi, factor), samples, seed, workers);
}

// ---------------------------------------------------------------------------
// Birkhoff averages
// ---------------------------------------------------------------------------

std::string_view to_string(Observable o)
{
    switch (o) {
    case Observable::constant:
        return "constant";
    case Observable::character_s3:
        return "character_s3";
    case Observable::s6_first:
        return "s6_first";
    case Observable::s8_first:
        return "s8_first";
    case Observable::s3_re_a2:
        return "s3_re_a2";
    }
    return "?";
}

Observable parse_observable(std::string_view s)
{
    for (Observable o : {Observable::constant, Observable::character_s3, Observable::s6_first, Observable::s8_first,
                         Observable::s3_re_a2})
        if (s == to_string(o))
            return o;
    throw std::invalid_argument("observable: unknown observable '" + std::string(s) + "'");
}

std::complex<double> evaluate(Observable o, const ProductPoint& x)
{
    switch (o) {
    case Observable::constant:
        return 1.0;
    case Observable::character_s3: {
        const std::complex<double> a2(x.s3.coords[0], x.s3.coords[1]);
        const double r = std::abs(a2);
        return r == 0.0 ? std::complex<double>(1.0) : a2 / r;
    }
    case Observable::s6_first:
        return x.s6.coords[0];
    case Observable::s8_first:
        return x.s8.coords[0];
    case Observable::s3_re_a2:
        return x.s3.coords[0];
    }
    return 0.0;
}

BirkhoffResult birkhoff_average(const DynamicsMap& phi, const BirkhoffConfig& cfg, unsigned workers)
{
    phi.validate();
    if (cfg.horizon < 1)
        throw std::invalid_argument("horizon: must be >= 1");

    BirkhoffResult r;
    r.starts = cfg.start_points;
    CounterRng rng(cfg.seed, 0);
    for (std::size_t k = 0; k < cfg.random_starts; ++k)
        r.starts.push_back(ProductPoint::random(rng));
    if (r.starts.empty())
        throw std::invalid_argument("start_points: need at least one start point");
    for (const auto& x : r.starts)
        x.validate();

    r.averages.assign(r.starts.size(), {});
    parallel_for(r.starts.size(), workers, [&](std::size_t k) {
        auto& avg = r.averages[k];
        avg.resize(cfg.horizon);
        ProductPoint x = r.starts[k];
        std::complex<double> sum = 0.0;
        for (std::size_t n = 1; n <= cfg.horizon; ++n) {
            sum += evaluate(cfg.observable, x);
            avg[n - 1] = sum / static_cast<double>(n);
            if (n < cfg.horizon)
                x = apply_map(phi, x);
        }
    });

    r.max_deviation.assign(cfg.horizon, 0.0);
    for (std::size_t n = 0; n < cfg.horizon; ++n) {
        double dev = 0.0;
        for (std::size_t a = 0; a < r.starts.size(); ++a)
            for (std::size_t b = a + 1; b < r.starts.size(); ++b)
                dev = std::max(dev, std::abs(r.averages[a][n] - r.averages[b][n]));
        r.max_deviation[n] = dev;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Orbit density
// ---------------------------------------------------------------------------

bool is_effectively_rational(double t, std::size_t max_den)
{
    // Convergents p_k/q_k of t via the usual recurrence.
    double p_prev = 1.0, q_prev = 0.0;
    double p = std::floor(t), q = 1.0;
    double rem = t - std::floor(t);
    for (;;) {
        if (q > static_cast<double>(max_den))
            return false;
        if (std::abs(t - p / q) <= kTolerances.rational_guard)
            return true;
        if (rem <= 0.0)
            return true;
        const double inv = 1.0 / rem;
        const double a = std::floor(inv);
        rem = inv - a;
        const double p_next = a * p + p_prev;
        const double q_next = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
}

CoverageResult orbit_density_check(const DynamicsMap& phi, const ProductPoint& x, std::size_t horizon, double eps)
{
    phi.validate();
    x.validate();
    if (!(eps > 0.0))
        throw std::invalid_argument("epsilon: must be > 0");
    if (horizon < 1)
        throw std::invalid_argument("horizon: must be >= 1");
    if (is_effectively_rational(phi.t, horizon))
        throw std::invalid_argument("t: rotation parameter " + std::to_string(phi.t) +
                                    " is rational at this horizon; the orbit closure would be finite");

    const bool flips = phi.apply_p6 || phi.apply_p8;
    const SpherePoint& flip_ref = phi.apply_p6 ? x.s6 : x.s8;

    // Orbit parameters per sign class (0: +, 1: -).
    std::vector<double> params[2];
    ProductPoint y = x;
    for (std::size_t i = 0; i < horizon; ++i) {
        const auto& a = x.s3.coords;
        const auto& b = y.s3.coords;
        // <x, y> in C^2 is e^{2 pi i s} for y on the circle orbit of x.
        const double re = a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
        const double im = a[0] * b[1] - a[1] * b[0] + a[2] * b[3] - a[3] * b[2];
        double s = std::atan2(im, re) / kTwoPi;
        if (s < 0.0)
            s += 1.0;
        if (s >= 1.0)
            s -= 1.0;
        int sign = 0;
        if (flips) {
            const SpherePoint& yf = phi.apply_p6 ? y.s6 : y.s8;
            sign = dot(yf.coords, flip_ref.coords) >= 0.0 ? 0 : 1;
        }
        params[sign].push_back(s);
        if (i + 1 < horizon)
            y = apply_map(phi, y);
    }

    CoverageResult r;
    for (auto& p : params) {
        std::sort(p.begin(), p.end());
        if (p.empty())
            continue;
        double gap = 1.0 - p.back() + p.front();
        for (std::size_t i = 1; i < p.size(); ++i)
            gap = std::max(gap, p[i] - p[i - 1]);
        r.max_gap = std::max(r.max_gap, gap);
    }

    const std::size_t cells = static_cast<std::size_t>(std::ceil(1.0 / eps - kTolerances.grid_slack));
    const int classes = flips ? 2 : 1;
    r.grid_points = cells * static_cast<std::size_t>(classes);
    for (int sign = 0; sign < classes; ++sign) {
        const auto& p = params[sign];
        if (p.empty())
            continue;
        for (std::size_t j = 0; j < cells; ++j) {
            const double g = static_cast<double>(j) / static_cast<double>(cells);
            auto it = std::lower_bound(p.begin(), p.end(), g);
            const double above = it == p.end() ? p.front() + 1.0 : *it;
            const double below = it == p.begin() ? p.back() - 1.0 : *(it - 1);
            const double d = std::min(above - g, g - below);
            if (d <= eps + kTolerances.grid_slack)
                ++r.covered;
        }
    }
    r.coverage = static_cast<double>(r.covered) / static_cast<double>(r.grid_points);
    return r;
}

} // namespace cpinv::dynamics
