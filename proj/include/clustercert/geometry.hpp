#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace clustercert {

/// Axis-aligned open cube in R^N, described by its center and side length.
class Cube {
public:
    Cube(int dim, std::vector<double> center, double side);

    int dim() const { return dim_; }
    const std::vector<double>& center() const { return center_; }
    double side() const { return side_; }

    double volume() const;
    double diagonal() const;

    /// Member j of the k^N partition into subcubes of side r/k, each j
    /// component in [0, k). The subcubes tile the parent up to null
    /// boundary overlap.
    Cube subcube(int k, std::span<const int> j) const;

private:
    int dim_;
    std::vector<double> center_;
    double side_;
};

bool operator==(const Cube& a, const Cube& b);

/// Uniform grid of m^N congruent cells on a cube. Samples live at cell
/// midpoints, so no sample ever sits on a cell boundary and pairwise
/// distances are bounded below by the cell side.
class GridSpec {
public:
    GridSpec(Cube cube, int m);

    const Cube& cube() const { return cube_; }
    int dim() const { return cube_.dim(); }
    int m() const { return m_; }
    double cell_side() const { return cell_side_; }
    std::size_t cell_count() const { return cell_count_; }

    /// Midpoint of cell idx: center - side/2 + (idx + 1/2) * h per axis.
    std::vector<double> cell_center(std::span<const int> idx) const;

    /// Lexicographic flat index, axis 0 most significant.
    std::size_t flatten(std::span<const int> idx) const;
    std::vector<int> unflatten(std::size_t flat) const;

    bool operator==(const GridSpec&) const = default;

private:
    Cube cube_;
    int m_;
    double cell_side_;
    std::size_t cell_count_;
};

/// Scalar samples at the midpoints of a uniform grid, stored in the fixed
/// lexicographic order of GridSpec::flatten. All values must be finite.
class GridFunction {
public:
    GridFunction(GridSpec spec, std::vector<double> values);

    const GridSpec& spec() const { return spec_; }
    const std::vector<double>& values() const { return values_; }
    double value(std::size_t flat) const { return values_[flat]; }

private:
    GridSpec spec_;
    std::vector<double> values_;
};

/// Samples of u falling inside subcube j of the depth-k partition, reindexed
/// as a GridFunction on that subcube with m/k cells per axis. Requires k | m
/// so the cell grid aligns exactly with the partition; no interpolation.
GridFunction restrict_to_subcube(const GridFunction& u, int k,
                                 std::span<const int> j);

// ---------------------------------------------------------------------------
// Analytic test-function families
// ---------------------------------------------------------------------------

struct ConstantFn {
    double value = 0.0;
};

/// f(x) = coeffs . x
struct LinearFn {
    std::vector<double> coeffs;
};

/// Gaussian bump: f(x) = height * exp(-|x - center|^2 / (2 width^2)).
struct BumpFn {
    std::vector<double> center;
    double width = 1.0;
    double height = 1.0;
};

/// Smoothed half-space step: f(x) = height/2 * (1 + tanh(steepness * (normal . x - offset))).
struct TanhPlateauFn {
    std::vector<double> normal;
    double offset = 0.0;
    double steepness = 1.0;
    double height = 1.0;
};

/// f(x) = high where x[axis] > threshold, low elsewhere. Discontinuous, BV-only.
struct IndicatorHalfspaceFn {
    int axis = 0;
    double threshold = 0.0;
    double low = 0.0;
    double high = 1.0;
};

/// Random trigonometric polynomial, fully determined by its seed: integer
/// wave vectors with components in {-3..3}\{0}, uniform phases and
/// coefficients, normalized by sqrt(terms).
struct RandomTrigFn {
    std::uint64_t seed = 0;
    int terms = 1;
    double amplitude = 1.0;
};

class FunctionSpec {
public:
    using Family = std::variant<ConstantFn, LinearFn, BumpFn, TanhPlateauFn,
                                IndicatorHalfspaceFn, RandomTrigFn>;

    explicit FunctionSpec(Family family) : family_(std::move(family)) {}

    const Family& family() const { return family_; }
    std::string family_name() const;

    /// Point evaluation. For families with a direction vector the vector
    /// length must match the point dimension.
    double evaluate(std::span<const double> x) const;

private:
    Family family_;
};

/// values[i] = f(cell_center(i)) for all cells, in lexicographic order.
/// Deterministic given the spec (seed included); throws if any evaluation
/// is non-finite or a parameter vector does not match the grid dimension.
GridFunction sample(const FunctionSpec& fspec, const GridSpec& spec);

}  // namespace clustercert
