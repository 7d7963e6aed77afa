#include "clustercert/geometry.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace clustercert {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

bool all_finite(std::span<const double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

Cube::Cube(int dim, std::vector<double> center, double side)
    : dim_(dim), center_(std::move(center)), side_(side) {
    require(dim_ >= 1, "Cube: dim must be >= 1");
    require(std::isfinite(side_) && side_ > 0, "Cube: side must be positive");
    require(static_cast<int>(center_.size()) == dim_,
            "Cube: center length must equal dim");
    require(all_finite(center_), "Cube: center must be finite");
}

double Cube::volume() const { return std::pow(side_, dim_); }

double Cube::diagonal() const { return std::sqrt(static_cast<double>(dim_)) * side_; }

Cube Cube::subcube(int k, std::span<const int> j) const {
    require(k >= 1, "subcube: k must be >= 1");
    require(static_cast<int>(j.size()) == dim_, "subcube: index length must equal dim");
    double sub_side = side_ / k;
    std::vector<double> sub_center(dim_);
    for (int a = 0; a < dim_; ++a) {
        require(j[a] >= 0 && j[a] < k, "subcube: index out of range");
        sub_center[a] = center_[a] - side_ / 2 + (j[a] + 0.5) * sub_side;
    }
    return Cube(dim_, std::move(sub_center), sub_side);
}

bool operator==(const Cube& a, const Cube& b) {
    return a.dim() == b.dim() && a.side() == b.side() && a.center() == b.center();
}

GridSpec::GridSpec(Cube cube, int m) : cube_(std::move(cube)), m_(m) {
    require(m_ >= 1, "GridSpec: m must be >= 1");
    double cells = std::pow(static_cast<double>(m_), cube_.dim());
    require(cells <= 1.5e9, "GridSpec: grid too large (m^dim exceeds 1.5e9 cells)");
    cell_side_ = cube_.side() / m_;
    cell_count_ = 1;
    for (int a = 0; a < cube_.dim(); ++a) cell_count_ *= static_cast<std::size_t>(m_);
}

std::vector<double> GridSpec::cell_center(std::span<const int> idx) const {
    const int n = dim();
    require(static_cast<int>(idx.size()) == n, "cell_center: index length must equal dim");
    std::vector<double> x(n);
    for (int a = 0; a < n; ++a) {
        require(idx[a] >= 0 && idx[a] < m_, "cell_center: index out of range");
        x[a] = cube_.center()[a] - cube_.side() / 2 + (idx[a] + 0.5) * cell_side_;
    }
    return x;
}

std::size_t GridSpec::flatten(std::span<const int> idx) const {
    const int n = dim();
    require(static_cast<int>(idx.size()) == n, "flatten: index length must equal dim");
    std::size_t flat = 0;
    for (int a = 0; a < n; ++a) {
        require(idx[a] >= 0 && idx[a] < m_, "flatten: index out of range");
        flat = flat * static_cast<std::size_t>(m_) + static_cast<std::size_t>(idx[a]);
    }
    return flat;
}

std::vector<int> GridSpec::unflatten(std::size_t flat) const {
    const int n = dim();
    require(flat < cell_count_, "unflatten: index out of range");
    std::vector<int> idx(n);
    for (int a = n - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % static_cast<std::size_t>(m_));
        flat /= static_cast<std::size_t>(m_);
    }
    return idx;
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values)
    : spec_(std::move(spec)), values_(std::move(values)) {
    require(values_.size() == spec_.cell_count(),
            "GridFunction: values length must equal m^dim");
    require(all_finite(values_), "GridFunction: values must be finite");
}

GridFunction restrict_to_subcube(const GridFunction& u, int k,
                                 std::span<const int> j) {
    const GridSpec& spec = u.spec();
    const int n = spec.dim();
    const int m = spec.m();
    require(k >= 1, "restrict: k must be >= 1");
    if (m % k != 0)
        throw std::invalid_argument(
            "restrict: partition depth k must divide the grid resolution m");
    Cube sub = spec.cube().subcube(k, j);  // also validates j
    const int sub_m = m / k;

    GridSpec sub_spec(sub, sub_m);
    std::vector<double> vals(sub_spec.cell_count());
    std::vector<int> local(n, 0);
    std::vector<int> parent(n);
    for (std::size_t fl = 0; fl < vals.size(); ++fl) {
        for (int a = 0; a < n; ++a) parent[a] = j[a] * sub_m + local[a];
        vals[fl] = u.value(spec.flatten(parent));
        for (int a = n - 1; a >= 0; --a) {
            if (++local[a] < sub_m) break;
            local[a] = 0;
        }
    }
    return GridFunction(std::move(sub_spec), std::move(vals));
}

// ---------------------------------------------------------------------------
// Function families
// ---------------------------------------------------------------------------

namespace {

double unit_double(std::mt19937_64& rng) {
    // Top 53 bits -> [0,1). Fixed mapping, independent of any library
    // distribution implementation.
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

struct TrigWave {
    std::vector<double> freq;
    double phase;
    double coeff;
};

std::vector<TrigWave> expand_trig(const RandomTrigFn& f, int dim) {
    if (f.terms < 1) throw std::invalid_argument("random-trig: terms must be >= 1");
    std::mt19937_64 rng(f.seed);
    std::vector<TrigWave> waves(static_cast<std::size_t>(f.terms));
    for (auto& w : waves) {
        w.freq.resize(dim);
        for (int a = 0; a < dim; ++a) {
            int pick = static_cast<int>(unit_double(rng) * 6.0);  // 0..5
            if (pick > 5) pick = 5;
            w.freq[a] = static_cast<double>(pick < 3 ? pick - 3 : pick - 2);
        }
        w.phase = 2.0 * M_PI * unit_double(rng);
        w.coeff = 2.0 * unit_double(rng) - 1.0;
    }
    return waves;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void require_dim(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw std::invalid_argument(std::string(what) +
                                    ": parameter vector length must equal dim");
}

}  // namespace

std::string FunctionSpec::family_name() const {
    struct Names {
        std::string operator()(const ConstantFn&) const { return "constant"; }
        std::string operator()(const LinearFn&) const { return "linear"; }
        std::string operator()(const BumpFn&) const { return "bump"; }
        std::string operator()(const TanhPlateauFn&) const { return "tanh-plateau"; }
        std::string operator()(const IndicatorHalfspaceFn&) const {
            return "indicator-halfspace";
        }
        std::string operator()(const RandomTrigFn&) const { return "random-trig"; }
    };
    return std::visit(Names{}, family_);
}

double FunctionSpec::evaluate(std::span<const double> x) const {
    struct Eval {
        std::span<const double> x;

        double operator()(const ConstantFn& f) const { return f.value; }
        double operator()(const LinearFn& f) const {
            require_dim(f.coeffs.size(), x.size(), "linear");
            return dot(f.coeffs, x);
        }
        double operator()(const BumpFn& f) const {
            require_dim(f.center.size(), x.size(), "bump");
            if (!(f.width > 0)) throw std::invalid_argument("bump: width must be positive");
            double d2 = 0.0;
            for (std::size_t a = 0; a < x.size(); ++a) {
                double d = x[a] - f.center[a];
                d2 += d * d;
            }
            return f.height * std::exp(-d2 / (2.0 * f.width * f.width));
        }
        double operator()(const TanhPlateauFn& f) const {
            require_dim(f.normal.size(), x.size(), "tanh-plateau");
            return 0.5 * f.height *
                   (1.0 + std::tanh(f.steepness * (dot(f.normal, x) - f.offset)));
        }
        double operator()(const IndicatorHalfspaceFn& f) const {
            if (f.axis < 0 || f.axis >= static_cast<int>(x.size()))
                throw std::invalid_argument("indicator-halfspace: axis out of range");
            return x[static_cast<std::size_t>(f.axis)] > f.threshold ? f.high : f.low;
        }
        double operator()(const RandomTrigFn& f) const {
            auto waves = expand_trig(f, static_cast<int>(x.size()));
            double s = 0.0;
            for (const auto& w : waves)
                s += w.coeff * std::cos(2.0 * M_PI * dot(w.freq, x) + w.phase);
            return f.amplitude * s / std::sqrt(static_cast<double>(f.terms));
        }
    };
    return std::visit(Eval{x}, family_);
}

GridFunction sample(const FunctionSpec& fspec, const GridSpec& spec) {
    const int n = spec.dim();
    const int m = spec.m();

    // random-trig: expand the wave set once instead of per cell.
    const RandomTrigFn* trig = std::get_if<RandomTrigFn>(&fspec.family());
    std::vector<TrigWave> waves;
    if (trig) waves = expand_trig(*trig, n);

    std::vector<double> vals(spec.cell_count());
    std::vector<int> idx(n, 0);
    for (std::size_t fl = 0; fl < vals.size(); ++fl) {
        std::vector<double> x = spec.cell_center(idx);
        double v;
        if (trig) {
            double s = 0.0;
            for (const auto& w : waves)
                s += w.coeff * std::cos(2.0 * M_PI * dot(w.freq, x) + w.phase);
            v = trig->amplitude * s / std::sqrt(static_cast<double>(trig->terms));
        } else {
            v = fspec.evaluate(x);
        }
        if (!std::isfinite(v))
            throw std::invalid_argument("sample: non-finite evaluation at cell " +
                                        std::to_string(fl));
        vals[fl] = v;
        for (int a = n - 1; a >= 0; --a) {
            if (++idx[a] < m) break;
            idx[a] = 0;
        }
    }
    return GridFunction(spec, std::move(vals));
}

}  // namespace clustercert
