#ifndef REEFOPT_TMD_HPP
#define REEFOPT_TMD_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "reefopt/problem.hpp"

namespace reefopt {

struct BuildingSpec {
    std::vector<double> stiffness;  // k_i, N/m, ground upward
    std::vector<double> mass;       // m_i, kg
    double xi_s = 0.01;             // proportional damping ratio

    int floors() const { return static_cast<int>(mass.size()); }
    void validate() const;

    // reference case studies
    static BuildingSpec two_floor_case();
    static BuildingSpec four_floor_case();
    static BuildingSpec experimental_rig();
};

struct TmdDesign {
    std::vector<double> omega_t;  // rad/s
    std::vector<double> xi_t;
    std::vector<double> m_t;  // kg
    std::vector<int> fb;      // floor index, 1-based

    int count() const { return static_cast<int>(omega_t.size()); }
    void validate(int n_floors) const;
};

struct TmdBounds {
    double omega_max = 50.0;
    double xi_max = 0.3;
    double m_max = 0.05;
};

struct FrfGrid {
    double omega_min = 0.5;  // > 0, keeps clear of the s=0 pole
    double omega_max = 60.0;
    double step = 0.005;

    void validate() const;
    int points() const;
    double omega(int i) const { return omega_min + step * i; }
};

struct StructuralMatrices {
    Eigen::MatrixXd mass;
    Eigen::MatrixXd stiffness;
    Eigen::MatrixXd damping;
};

// M = diag(m); K tridiagonal from the storey stiffnesses;
// C = a*M + b*K with a = 2*xi*wa*wb/(wa+wb), b = 2*xi/(wa+wb), where
// (wa, wb) are the two highest natural frequencies.
StructuralMatrices assemble_matrices(const BuildingSpec& spec);

struct ModalResult {
    std::vector<double> omegas;  // rad/s, ascending
    Eigen::MatrixXd shapes;      // mass-normalized columns
};

ModalResult natural_frequencies(const Eigen::MatrixXd& mass, const Eigen::MatrixXd& stiffness);

// H(s) = -m_t * (2*xi*w*s + w^2) / (s^2 + 2*xi*w*s + w^2); identically 0 for m_t = 0.
std::complex<double> tmd_transfer(double omega_t, double xi_t, double m_t,
                                  std::complex<double> s);

// Closed-loop FRF evaluator. The open-loop force-to-acceleration and
// ground-to-acceleration responses are precomputed per grid frequency, so
// evaluating a design costs one small complex solve per grid point.
class TmdModel {
public:
    TmdModel(BuildingSpec spec, FrfGrid grid = {});

    const BuildingSpec& spec() const { return spec_; }
    const FrfGrid& grid() const { return grid_; }
    int floors() const { return spec_.floors(); }

    // |Y_i / A_g| per floor over the grid (linear magnitude, capped at 1e9)
    std::vector<std::vector<double>> frf_closed_loop(const TmdDesign& design) const;

    // max over floors and frequencies, with three-point parabolic peak
    // refinement around each floor's grid argmax
    double fitness(const TmdDesign& design) const;

    // exact closed-loop floor accelerations at an arbitrary frequency
    std::vector<std::complex<double>> response_at(const TmdDesign& design,
                                                  double omega) const;

private:
    void floor_magnitudes(const TmdDesign& design, int point, double* out) const;

    BuildingSpec spec_;
    FrfGrid grid_;
    StructuralMatrices mats_;
    // per grid point: force-to-acceleration block (column-major N*N) and
    // ground-to-acceleration column (N)
    std::vector<std::complex<double>> gf_;
    std::vector<std::complex<double>> gg_;
};

// Convenience wrapper constructing a model per call; prefer TmdModel when
// evaluating many designs.
double fitness_g(const Genome& genome, const BuildingSpec& spec, const FrfGrid& grid = {});

// Genome layout: [omega x M, xi x M, m x M, fb x M]; group tags
// 2 = frequency, 1 = damping, 0 = mass, 3 = position.
class TmdProblem : public Problem {
public:
    TmdProblem(BuildingSpec spec, int n_tmds, FrfGrid grid = {}, TmdBounds bounds = {});

    const EncodingSpec& encoding() const override { return encoding_; }
    double evaluate(const Genome& g) const override { return model_.fitness(decode(g)); }

    const TmdModel& model() const { return model_; }
    int n_tmds() const { return n_tmds_; }

    TmdDesign decode(const Genome& g) const;
    static Genome encode(const TmdDesign& design);

private:
    TmdModel model_;
    int n_tmds_;
    EncodingSpec encoding_;
};

} // namespace reefopt

#endif
