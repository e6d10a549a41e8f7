#include "reefopt/tmd.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace reefopt {

namespace {

constexpr double kMagnitudeCap = 1e9;

using Complex = std::complex<double>;

// in-place partial-pivot elimination, a is column-major n x n, b length n
void solve_small(Complex* a, Complex* b, int n) {
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(a[col + col * n]);
        for (int r = col + 1; r < n; ++r) {
            const double v = std::abs(a[r + col * n]);
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (pivot != col) {
            for (int c = col; c < n; ++c) std::swap(a[col + c * n], a[pivot + c * n]);
            std::swap(b[col], b[pivot]);
        }
        const Complex inv = 1.0 / a[col + col * n];
        for (int r = col + 1; r < n; ++r) {
            const Complex factor = a[r + col * n] * inv;
            if (factor == Complex(0.0, 0.0)) continue;
            for (int c = col + 1; c < n; ++c) a[r + c * n] -= factor * a[col + c * n];
            b[r] -= factor * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        Complex acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= a[r + c * n] * b[c];
        b[r] = acc / a[r + r * n];
    }
}

} // namespace

void BuildingSpec::validate() const {
    if (mass.empty() || stiffness.size() != mass.size())
        throw std::invalid_argument("building: need matching stiffness/mass lists");
    for (double v : stiffness)
        if (v <= 0.0) throw std::invalid_argument("building: stiffness must be > 0");
    for (double v : mass)
        if (v <= 0.0) throw std::invalid_argument("building: mass must be > 0");
    if (xi_s <= 0.0) throw std::invalid_argument("building: damping ratio must be > 0");
}

BuildingSpec BuildingSpec::two_floor_case() { return {{1000.0, 500.0}, {2.0, 1.0}, 0.01}; }

BuildingSpec BuildingSpec::four_floor_case() {
    return {{2000.0, 1500.0, 1000.0, 500.0}, {2.0, 2.0, 2.0, 1.0}, 0.01};
}

BuildingSpec BuildingSpec::experimental_rig() {
    // storey stiffnesses backed out of the identified modal frequencies
    // (11.842 and 27.733 rad/s); within 0.5% of the reported 1111.8 and 389.1
    return {{1110.41107645568, 390.779393167393}, {2.14, 1.88}, 0.006};
}

void TmdDesign::validate(int n_floors) const {
    const std::size_t m = omega_t.size();
    if (xi_t.size() != m || m_t.size() != m || fb.size() != m)
        throw std::invalid_argument("tmd design: component lists must share one length");
    for (int f : fb)
        if (f < 1 || f > n_floors)
            throw std::invalid_argument("tmd design: floor index out of range");
}

void FrfGrid::validate() const {
    if (omega_min <= 0.0) throw std::invalid_argument("grid: omega_min must be > 0");
    if (step <= 0.0) throw std::invalid_argument("grid: step must be > 0");
    if (omega_max <= omega_min) throw std::invalid_argument("grid: omega_max <= omega_min");
}

int FrfGrid::points() const {
    return static_cast<int>(std::floor((omega_max - omega_min) / step + 1e-9)) + 1;
}

StructuralMatrices assemble_matrices(const BuildingSpec& spec) {
    spec.validate();
    const int n = spec.floors();
    StructuralMatrices out;
    out.mass = Eigen::MatrixXd::Zero(n, n);
    out.stiffness = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        out.mass(i, i) = spec.mass[i];
        out.stiffness(i, i) = spec.stiffness[i] + (i + 1 < n ? spec.stiffness[i + 1] : 0.0);
        if (i + 1 < n) {
            out.stiffness(i, i + 1) = -spec.stiffness[i + 1];
            out.stiffness(i + 1, i) = -spec.stiffness[i + 1];
        }
    }
    // Rayleigh fit anchored at the two highest modes. For n = 2 this equals
    // the usual (w1, w2) anchoring; for n = 4 it reproduces the reference
    // modal damping set {0.020, 0.011, 0.010, 0.010} that a (w1, w2) anchor
    // cannot produce.
    const auto modal = natural_frequencies(out.mass, out.stiffness);
    const double wb = modal.omegas[n - 1];
    const double wa = n > 1 ? modal.omegas[n - 2] : wb;
    const double a = 2.0 * spec.xi_s * wa * wb / (wa + wb);
    const double b = 2.0 * spec.xi_s / (wa + wb);
    out.damping = a * out.mass + b * out.stiffness;
    return out;
}

ModalResult natural_frequencies(const Eigen::MatrixXd& mass,
                                const Eigen::MatrixXd& stiffness) {
    const int n = static_cast<int>(mass.rows());
    // M is diagonal positive, so M^{-1/2} K M^{-1/2} keeps symmetry
    Eigen::VectorXd inv_sqrt_m(n);
    for (int i = 0; i < n; ++i) {
        if (mass(i, i) <= 0.0)
            throw std::invalid_argument("natural_frequencies: mass must be positive diagonal");
        inv_sqrt_m(i) = 1.0 / std::sqrt(mass(i, i));
    }
    const Eigen::MatrixXd b =
        inv_sqrt_m.asDiagonal() * stiffness * inv_sqrt_m.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("natural_frequencies: eigen solve failed");
    ModalResult out;
    out.omegas.resize(n);
    for (int i = 0; i < n; ++i) out.omegas[i] = std::sqrt(std::max(solver.eigenvalues()(i), 0.0));
    out.shapes = inv_sqrt_m.asDiagonal() * solver.eigenvectors();  // phi^T M phi = I
    return out;
}

std::complex<double> tmd_transfer(double omega_t, double xi_t, double m_t,
                                  std::complex<double> s) {
    if (m_t == 0.0) return {0.0, 0.0};
    const double w2 = omega_t * omega_t;
    const Complex num = 2.0 * xi_t * omega_t * s + w2;
    const Complex den = s * s + 2.0 * xi_t * omega_t * s + w2;
    return -m_t * num / den;
}

TmdModel::TmdModel(BuildingSpec spec, FrfGrid grid)
    : spec_(std::move(spec)), grid_(grid), mats_(assemble_matrices(spec_)) {
    grid_.validate();
    const int n = floors();
    const int pts = grid_.points();
    gf_.resize(static_cast<std::size_t>(pts) * n * n);
    gg_.resize(static_cast<std::size_t>(pts) * n);

    Eigen::VectorXd neg_m_r(n);
    for (int i = 0; i < n; ++i) neg_m_r(i) = -mats_.mass(i, i);

    Eigen::MatrixXcd dyn(n, n);
    for (int p = 0; p < pts; ++p) {
        const double w = grid_.omega(p);
        const Complex s(0.0, w);
        dyn = (s * s * mats_.mass + s * mats_.damping + mats_.stiffness).cast<Complex>();
        const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(dyn);
        const Eigen::MatrixXcd inv = lu.inverse();
        const Eigen::MatrixXcd gf = s * s * inv;  // force -> acceleration
        const Eigen::VectorXcd gg = gf * neg_m_r.cast<Complex>() +
                                    Eigen::VectorXcd::Ones(n);  // ground -> acceleration
        for (int c = 0; c < n; ++c)
            for (int r = 0; r < n; ++r)
                gf_[(static_cast<std::size_t>(p) * n + c) * n + r] = gf(r, c);
        for (int r = 0; r < n; ++r) gg_[static_cast<std::size_t>(p) * n + r] = gg(r);
    }
}

void TmdModel::floor_magnitudes(const TmdDesign& design, int point, double* out) const {
    const int n = floors();
    const Complex s(0.0, grid_.omega(point));

    Complex h[16] = {};
    bool finite = true;
    for (int j = 0; j < design.count(); ++j) {
        const Complex hj =
            tmd_transfer(design.omega_t[j], design.xi_t[j], design.m_t[j], s);
        if (!std::isfinite(hj.real()) || !std::isfinite(hj.imag())) finite = false;
        h[design.fb[j] - 1] += hj;
    }
    if (!finite) {
        for (int i = 0; i < n; ++i) out[i] = kMagnitudeCap;
        return;
    }

    Complex a[16 * 16];
    Complex y[16];
    const Complex* gf = &gf_[(static_cast<std::size_t>(point)) * n * n];
    const Complex* gg = &gg_[static_cast<std::size_t>(point) * n];
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r)
            a[r + c * n] = (r == c ? Complex(1.0, 0.0) : Complex(0.0, 0.0)) -
                           gf[r + c * n] * h[c];
    for (int r = 0; r < n; ++r) y[r] = gg[r];
    solve_small(a, y, n);
    for (int i = 0; i < n; ++i) {
        const double m = std::abs(y[i]);
        out[i] = std::isfinite(m) ? std::min(m, kMagnitudeCap) : kMagnitudeCap;
    }
}

std::vector<std::vector<double>> TmdModel::frf_closed_loop(const TmdDesign& design) const {
    design.validate(floors());
    const int n = floors();
    if (n > 16) throw std::invalid_argument("tmd model: at most 16 floors supported");
    const int pts = grid_.points();
    std::vector<std::vector<double>> curves(n, std::vector<double>(pts));
    double mags[16];
    for (int p = 0; p < pts; ++p) {
        floor_magnitudes(design, p, mags);
        for (int i = 0; i < n; ++i) curves[i][p] = mags[i];
    }
    return curves;
}

std::vector<std::complex<double>> TmdModel::response_at(const TmdDesign& design,
                                                        double omega) const {
    const int n = floors();
    const Complex s(0.0, omega);
    Eigen::MatrixXcd dyn =
        (s * s * mats_.mass + s * mats_.damping + mats_.stiffness).cast<Complex>();
    const Eigen::MatrixXcd inv = dyn.partialPivLu().inverse();
    const Eigen::MatrixXcd gf = s * s * inv;
    Eigen::VectorXd neg_m_r(n);
    for (int i = 0; i < n; ++i) neg_m_r(i) = -mats_.mass(i, i);
    const Eigen::VectorXcd gg =
        gf * neg_m_r.cast<Complex>() + Eigen::VectorXcd::Ones(n);

    Eigen::VectorXcd h = Eigen::VectorXcd::Zero(n);
    for (int j = 0; j < design.count(); ++j)
        h(design.fb[j] - 1) += tmd_transfer(design.omega_t[j], design.xi_t[j], design.m_t[j], s);
    const Eigen::MatrixXcd a =
        Eigen::MatrixXcd::Identity(n, n) - gf * h.asDiagonal().toDenseMatrix();
    const Eigen::VectorXcd y = a.partialPivLu().solve(gg);
    return {y.data(), y.data() + n};
}

double TmdModel::fitness(const TmdDesign& design) const {
    design.validate(floors());
    const int n = floors();
    if (n > 16) throw std::invalid_argument("tmd model: at most 16 floors supported");
    const int pts = grid_.points();

    double peak[16];
    int argmax[16];
    for (int i = 0; i < n; ++i) {
        peak[i] = -1.0;
        argmax[i] = 0;
    }
    double mags[16];
    // track each floor's maximum and its immediate neighbours for refinement
    std::vector<double> col_curr(n, 0.0);
    std::vector<std::array<double, 3>> tri(n, {0.0, 0.0, 0.0});
    for (int p = 0; p < pts; ++p) {
        floor_magnitudes(design, p, mags);
        for (int i = 0; i < n; ++i) {
            if (mags[i] > peak[i]) {
                peak[i] = mags[i];
                argmax[i] = p;
                tri[i][0] = p > 0 ? col_curr[i] : mags[i];
                tri[i][1] = mags[i];
            } else if (p == argmax[i] + 1) {
                tri[i][2] = mags[i];
            }
            col_curr[i] = mags[i];
        }
    }

    double g = 0.0;
    for (int i = 0; i < n; ++i) {
        g = std::max(g, peak[i]);
        const int p = argmax[i];
        if (p == 0 || p == pts - 1) continue;
        const double y0 = tri[i][0], y1 = tri[i][1], y2 = tri[i][2];
        const double denom = y0 - 2.0 * y1 + y2;
        if (denom >= 0.0) continue;  // not a local parabolic peak
        const double offset = 0.5 * (y0 - y2) / denom;
        if (std::abs(offset) > 1.0) continue;
        const double omega_star = grid_.omega(p) + offset * grid_.step;
        const auto y = response_at(design, omega_star);
        const double m = std::abs(y[i]);
        if (std::isfinite(m)) g = std::max(g, std::min(m, kMagnitudeCap));
    }
    return g;
}

double fitness_g(const Genome& genome, const BuildingSpec& spec, const FrfGrid& grid) {
    if (genome.size() % 4 != 0)
        throw std::invalid_argument("fitness_g: genome length must be 4*M");
    TmdModel model(spec, grid);
    TmdProblem helper(spec, static_cast<int>(genome.size() / 4), grid);
    return model.fitness(helper.decode(genome));
}

TmdProblem::TmdProblem(BuildingSpec spec, int n_tmds, FrfGrid grid, TmdBounds bounds)
    : model_(std::move(spec), grid), n_tmds_(n_tmds) {
    if (n_tmds < 1) throw std::invalid_argument("tmd problem: need at least one TMD");
    const int n_floors = model_.floors();
    for (int j = 0; j < n_tmds; ++j)
        encoding_.genes.push_back({GeneKind::Real, 0.0, bounds.omega_max, 2});
    for (int j = 0; j < n_tmds; ++j)
        encoding_.genes.push_back({GeneKind::Real, 0.0, bounds.xi_max, 1});
    for (int j = 0; j < n_tmds; ++j)
        encoding_.genes.push_back({GeneKind::Real, 0.0, bounds.m_max, 0});
    for (int j = 0; j < n_tmds; ++j)
        encoding_.genes.push_back(
            {GeneKind::Integer, 1.0, static_cast<double>(n_floors), 3});
    encoding_.validate();
}

TmdDesign TmdProblem::decode(const Genome& g) const {
    if (g.size() != static_cast<std::size_t>(4 * n_tmds_))
        throw std::invalid_argument("tmd problem: genome length must be 4*M");
    TmdDesign d;
    for (int j = 0; j < n_tmds_; ++j) d.omega_t.push_back(g[j]);
    for (int j = 0; j < n_tmds_; ++j) d.xi_t.push_back(g[n_tmds_ + j]);
    for (int j = 0; j < n_tmds_; ++j) d.m_t.push_back(g[2 * n_tmds_ + j]);
    for (int j = 0; j < n_tmds_; ++j)
        d.fb.push_back(static_cast<int>(std::lround(g[3 * n_tmds_ + j])));
    return d;
}

Genome TmdProblem::encode(const TmdDesign& design) {
    Genome g;
    g.insert(g.end(), design.omega_t.begin(), design.omega_t.end());
    g.insert(g.end(), design.xi_t.begin(), design.xi_t.end());
    g.insert(g.end(), design.m_t.begin(), design.m_t.end());
    for (int f : design.fb) g.push_back(static_cast<double>(f));
    return g;
}

} // namespace reefopt
