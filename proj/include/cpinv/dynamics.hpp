/**
 * Numerical harness for the pre-limit maps x -> R_t(P(x)) on S^3 x S^6 x S^8,
 * where R_t is the free circle action on the S^3 factor and P is a selection
 * of antipodal maps on S^6 and S^8.
 *
 * The minimal uniquely ergodic diffeomorphisms themselves only exist as
 * limits of conjugates of these maps; everything here is finite-horizon
 * evidence about the building blocks.
 */
#ifndef CPINV_DYNAMICS_HPP
#define CPINV_DYNAMICS_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cpinv/rng.hpp"

namespace cpinv::dynamics {

/// Every numerical threshold used by the harness.
struct Tolerances
{
    double unit_norm = 1e-12;        // accepted |norm - 1| on input points
    double renormalize_drift = 1e-13; // renormalize once drift exceeds this
    double degree_rounding = 0.2;    // |raw mean - round| beyond this fails
    double rational_guard = 1e-12;   // |t - p/q| below this counts as rational
    double jacobian_step = 1e-5;     // central-difference step along great circles
    double grid_slack = 1e-12;       // distance slack when matching grid points
    std::size_t min_degree_samples = 10000;
    std::size_t reduction_chunks = 64;
};

inline constexpr Tolerances kTolerances{};

/// Unit vector in R^(n+1). The S^3 factor stores (Re a2, Im a2, Re a3, Im a3).
struct SpherePoint
{
    std::vector<double> coords;

    int dim() const { return static_cast<int>(coords.size()) - 1; }
    double norm() const;
    void renormalize_if_drifted();

    static SpherePoint north_pole(int n);
    static SpherePoint random(int n, CounterRng& rng);
};

struct ProductPoint
{
    SpherePoint s3;
    SpherePoint s6;
    SpherePoint s8;

    /// Throws std::invalid_argument if any factor is off the sphere or has the
    /// wrong dimension.
    void validate() const;

    static ProductPoint random(CounterRng& rng);
};

struct DynamicsMap
{
    double t = 0.0; // circle parameter in [0, 1)
    bool apply_p6 = false;
    bool apply_p8 = false;

    void validate() const;
};

/// Composite map: first `inner`, then `outer`.
DynamicsMap compose(const DynamicsMap& outer, const DynamicsMap& inner);

/// Rotation then antipodal maps; output norms stay within the unit tolerance.
ProductPoint apply_map(const DynamicsMap& phi, const ProductPoint& x);

enum class SphereFactor
{
    s3,
    s6,
    s8,
};

int sphere_dim(SphereFactor f);
std::string_view to_string(SphereFactor f);
SphereFactor parse_sphere_factor(std::string_view s);

/// Map S^n -> S^n acting on ambient coordinates.
struct SphereMap
{
    int dim = 0;
    std::function<void(std::span<const double>, std::span<double>)> apply;
};

SphereMap factor_map(const DynamicsMap& phi, SphereFactor f);
SphereMap compose(const SphereMap& outer, const SphereMap& inner);

/**
 * Oriented Jacobian determinant of f at x: the ratio of the pulled-back
 * volume form to the volume form. For isometries this is the constant +-1.
 */
double jacobian_determinant(const SphereMap& f, std::span<const double> x);

struct DegreeEstimate
{
    long degree = 0;
    double raw_mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t samples = 0;
};

class DegreeEstimationError : public std::runtime_error
{
    public:
        using std::runtime_error::runtime_error;
};

/**
 * Monte Carlo degree: the mean oriented Jacobian over uniform points of S^n
 * is the degree. Samples are split into a fixed number of chunks with one
 * RNG stream each; chunk sums are reduced in chunk order, so the result is
 * independent of `workers` (0 picks the hardware concurrency).
 */
DegreeEstimate estimate_degree(const SphereMap& f, std::size_t samples, std::uint64_t seed, unsigned workers = 0);
DegreeEstimate estimate_degree(SphereFactor factor, const DynamicsMap& phi, std::size_t samples,
                               std::uint64_t seed, unsigned workers = 0);

enum class Observable
{
    constant,     // 1
    character_s3, // a2 / |a2|, the character e^{2 pi i arg a2} with arg in turns
    s6_first,     // first coordinate of the S^6 factor
    s8_first,     // first coordinate of the S^8 factor
    s3_re_a2,     // Re a2
};

std::string_view to_string(Observable o);
Observable parse_observable(std::string_view s);
std::complex<double> evaluate(Observable o, const ProductPoint& x);

struct BirkhoffConfig
{
    std::size_t horizon = 1;
    Observable observable = Observable::constant;
    std::vector<ProductPoint> start_points;
    std::size_t random_starts = 0; // drawn uniformly with `seed`, after the explicit ones
    std::uint64_t seed = 0;
};

struct BirkhoffResult
{
    std::vector<ProductPoint> starts;
    // averages[k][n-1] = A_n(starts[k]) = (1/n) sum_{i<n} obs(f^i x)
    std::vector<std::vector<std::complex<double>>> averages;
    // max over start pairs of |A_n(x) - A_n(y)|, indexed by n-1
    std::vector<double> max_deviation;
};

BirkhoffResult birkhoff_average(const DynamicsMap& phi, const BirkhoffConfig& cfg, unsigned workers = 0);

/// True if some continued-fraction convergent p/q of t with q <= max_den
/// lies within the rational guard of t.
bool is_effectively_rational(double t, std::size_t max_den);

struct CoverageResult
{
    double coverage = 0.0;
    std::size_t grid_points = 0;
    std::size_t covered = 0;
    double max_gap = 0.0; // largest circular gap between orbit parameters of one sign
};

/**
 * The orbit closure of x under R_t o P is the circle orbit of x together
 * with the circle orbit of P(x) (just the first when P is the identity),
 * parametrized by (s in [0,1), sign). Returns the fraction of an eps-grid on
 * that parameter space lying within eps of {f^i x : 0 <= i < horizon}.
 * Rejects t that is rational at this horizon.
 */
CoverageResult orbit_density_check(const DynamicsMap& phi, const ProductPoint& x, std::size_t horizon, double eps);

} // namespace cpinv::dynamics

#endif
