#include "dissensus/disruption.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "dissensus/equilibrium.hpp"
#include "dissensus/errors.hpp"

namespace dissensus {

const char* toString(StateTag tag) {
    switch (tag) {
    case StateTag::Innate: return "innate";
    case StateTag::BasicEq: return "basic";
    case StateTag::ExtendedEq: return "extended";
    case StateTag::Manipulated: return "manipulated";
    }
    return "unknown";
}

namespace {

void checkSize(const Graph& g, const Vector& x) {
    if (static_cast<std::size_t>(x.size()) != g.numberOfNodes()) {
        throw InvalidArgument("opinion vector has size " + std::to_string(x.size()) + ", graph has "
                              + std::to_string(g.numberOfNodes()) + " nodes");
    }
}

SparseMatrix shiftedLaplacian(const Graph& g) {
    SparseMatrix system = laplacian(g);
    for (Eigen::Index i = 0; i < system.rows(); ++i) {
        system.coeffRef(i, i) += 1.0;
    }
    system.makeCompressed();
    return system;
}

// Largest eigenvalue of a symmetric operator whose spectrum lies in [-shift, inf),
// by power iteration on op + shift * I.
double powerLargest(const std::function<Vector(const Vector&)>& op, Eigen::Index n, double shift,
                    int iterations) {
    std::mt19937_64 rng(0x5eedULL);
    std::normal_distribution<double> normal;
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v(i) = normal(rng);
    }
    v.normalize();
    double rayleigh = 0.0;
    for (int it = 0; it < iterations; ++it) {
        Vector w = op(v) + shift * v;
        rayleigh = v.dot(w);
        const double norm = w.norm();
        if (norm == 0.0) {
            break;
        }
        v = w / norm;
    }
    return rayleigh - shift;
}

constexpr int kPowerIterations = 500;

} // namespace

double polarization(const Vector& x) {
    if (x.size() == 0) {
        throw InvalidArgument("polarization of an empty vector");
    }
    const double mean = x.mean();
    return (x.array() - mean).square().sum();
}

double disagreement(const Graph& g, const Vector& x) {
    checkSize(g, x);
    double total = 0.0;
    for (const auto& e : g.edges()) {
        const double diff = x(static_cast<Eigen::Index>(e.u)) - x(static_cast<Eigen::Index>(e.v));
        total += diff * diff;
    }
    return total;
}

double disruptionQuadraticForm(const Graph& g, const Vector& x) {
    checkSize(g, x);
    if (x.size() == 0) {
        throw InvalidArgument("disruption of an empty vector");
    }
    const Vector lx = laplacian(g) * x;
    const Vector xx = x + lx - Vector::Constant(x.size(), x.mean());
    return x.dot(xx);
}

DisruptionReport disruption(const Graph& g, const Vector& x, StateTag tag) {
    DisruptionReport report;
    report.tag = tag;
    report.polarization = polarization(x);
    report.disagreement = disagreement(g, x);
    const double sumForm = report.polarization + report.disagreement;
    const double quadratic = disruptionQuadraticForm(g, x);
    if (std::abs(sumForm - quadratic) > 1e-9 * std::max({1.0, std::abs(sumForm), std::abs(quadratic)})) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "disruption cross-check failed: sum form " << sumForm << " vs quadratic form " << quadratic;
        throw SolverError(msg.str());
    }
    report.disruption = quadratic;
    return report;
}

Eigen::MatrixXd disruptionMatrix(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.numberOfNodes());
    Eigen::MatrixXd x = Eigen::MatrixXd(laplacian(g));
    x.diagonal().array() += 1.0;
    if (n > 0) {
        x.array() -= 1.0 / static_cast<double>(n);
    }
    return x;
}

bool TheoremOneCertificate::holds() const {
    if (!diagnostic.empty()) {
        return false;
    }
    if (gap > 1e-9 * std::max(1.0, innateDisruption)) {
        return false;
    }
    if (maxYEigenvalue > 1e-9) {
        return false;
    }
    return std::all_of(sigmaSpectrum.begin(), sigmaSpectrum.end(), [](double s) { return s >= 1.0 - 1e-9; });
}

TheoremOneCertificate verifyTheoremOne(const Graph& g, const OpinionVector& s, std::size_t denseLimit) {
    TheoremOneCertificate cert;
    const auto equilibrium = solveBasic(g, s);
    cert.innateDisruption = disruption(g, s.values(), StateTag::Innate).disruption;
    cert.equilibriumDisruption = disruption(g, equilibrium.z, StateTag::BasicEq).disruption;
    cert.gap = cert.equilibriumDisruption - cert.innateDisruption;

    const auto n = static_cast<Eigen::Index>(g.numberOfNodes());
    if (g.numberOfNodes() <= denseLimit) {
        cert.dense = true;
        Eigen::MatrixXd shifted = Eigen::MatrixXd(laplacian(g));
        shifted.diagonal().array() += 1.0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sigmaSolver(shifted, Eigen::EigenvaluesOnly);
        if (sigmaSolver.info() != Eigen::Success) {
            cert.diagnostic = "eigendecomposition of I + L failed";
            return cert;
        }
        const auto& sigma = sigmaSolver.eigenvalues();
        cert.sigmaSpectrum.assign(sigma.data(), sigma.data() + sigma.size());

        const Eigen::LLT<Eigen::MatrixXd> llt(shifted);
        const Eigen::MatrixXd inverse = llt.solve(Eigen::MatrixXd::Identity(n, n));
        const Eigen::MatrixXd x = disruptionMatrix(g);
        Eigen::MatrixXd y = inverse * x * inverse - x;
        y = 0.5 * (y + y.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ySolver(y, Eigen::EigenvaluesOnly);
        if (ySolver.info() != Eigen::Success) {
            cert.diagnostic = "eigendecomposition of Y failed";
            return cert;
        }
        cert.maxYEigenvalue = ySolver.eigenvalues().maxCoeff();
        return cert;
    }

    // Matrix-free estimate: Y v = (I+L)^{-1} X (I+L)^{-1} v - X v.
    cert.dense = false;
    const SparseMatrix shifted = shiftedLaplacian(g);
    const SparseMatrix lap = laplacian(g);
    Eigen::SimplicialLLT<SparseMatrix> llt(shifted);
    if (llt.info() != Eigen::Success) {
        cert.diagnostic = "Cholesky factorization of I + L failed";
        return cert;
    }
    auto applyX = [&](const Vector& v) -> Vector {
        return v + lap * v - Vector::Constant(v.size(), v.mean());
    };
    auto applyY = [&](const Vector& v) -> Vector {
        const Vector inner = llt.solve(v);
        return Vector(llt.solve(applyX(inner))) - applyX(v);
    };
    const double sigmaBound = 1.0 + 2.0 * static_cast<double>(g.maxDegree());
    cert.maxYEigenvalue = powerLargest(applyY, n, sigmaBound, kPowerIterations);
    return cert;
}

XMatrixCheck checkXMatrix(const Graph& g, std::size_t denseLimit) {
    XMatrixCheck check;
    const auto n = static_cast<Eigen::Index>(g.numberOfNodes());
    if (n == 0) {
        return check;
    }
    const SparseMatrix lap = laplacian(g);
    auto applyX = [&](const Vector& v) -> Vector {
        return v + lap * v - Vector::Constant(v.size(), v.mean());
    };
    check.nullResidual = applyX(Vector::Ones(n)).lpNorm<Eigen::Infinity>();

    if (g.numberOfNodes() <= denseLimit) {
        check.dense = true;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(disruptionMatrix(g), Eigen::EigenvaluesOnly);
        check.minEigenvalue = solver.eigenvalues().minCoeff();
        return check;
    }
    check.dense = false;
    // Spectrum of X is inside [0, 1 + 2 d_max]; power iteration on c I - X finds c - lambda_min.
    const double bound = 1.0 + 2.0 * static_cast<double>(g.maxDegree());
    auto negated = [&](const Vector& v) -> Vector { return -applyX(v); };
    check.minEigenvalue = -powerLargest(negated, n, bound, kPowerIterations);
    return check;
}

} // namespace dissensus
