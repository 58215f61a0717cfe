#include "dissensus/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "dissensus/errors.hpp"

namespace dissensus {

const char* toString(Model model) {
    return model == Model::Basic ? "basic" : "extended";
}

namespace {

using SparseLUSolver = Eigen::SparseLU<SparseMatrix>;

void checkSize(std::size_t expected, std::size_t actual, const char* what) {
    if (expected != actual) {
        std::ostringstream msg;
        msg << what << " has size " << actual << ", graph has " << expected << " nodes";
        throw InvalidArgument(msg.str());
    }
}

double maxNorm(const Vector& v) {
    return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

double columnNorm1(const SparseMatrix& a) {
    double best = 0.0;
    for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
        double sum = 0.0;
        for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
            sum += std::abs(it.value());
        }
        best = std::max(best, sum);
    }
    return best;
}

// Hager/Higham 1-norm estimate of A^{-1} from an existing LU factorization.
double estimateInverseNorm1(SparseLUSolver& lu, Eigen::Index n) {
    Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
    double estimate = 0.0;
    Eigen::Index lastIndex = -1;
    for (int iter = 0; iter < 5; ++iter) {
        Vector y = lu.solve(x);
        const double norm = y.lpNorm<1>();
        if (iter > 0 && norm <= estimate) {
            break;
        }
        estimate = norm;
        Vector signs = y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
        Vector z = lu.transpose().solve(signs);
        Eigen::Index j = 0;
        const double zmax = z.cwiseAbs().maxCoeff(&j);
        if (iter > 0 && (zmax <= z.dot(x) || j == lastIndex)) {
            break;
        }
        lastIndex = j;
        x.setZero();
        x(j) = 1.0;
    }
    // Alternating probe catches cases where the greedy search stalls.
    Vector alt(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        alt(i) = sign * (1.0 + (n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0));
    }
    const double altEstimate = 2.0 * Vector(lu.solve(alt)).lpNorm<1>() / (3.0 * static_cast<double>(n));
    return std::max(estimate, altEstimate);
}

template <typename Solver>
Vector refinedSolve(const Solver& solver, const SparseMatrix& a, const Vector& b, double& residual) {
    Vector z = solver.solve(b);
    residual = maxNorm(a * z - b);
    for (int step = 0; step < 3 && residual > kResidualTolerance; ++step) {
        Vector correction = solver.solve(Vector(b - a * z));
        Vector candidate = z + correction;
        const double candidateResidual = maxNorm(a * candidate - b);
        if (!(candidateResidual < residual)) {
            break;
        }
        z = std::move(candidate);
        residual = candidateResidual;
    }
    return z;
}

} // namespace

EquilibriumResult solveBasic(const Graph& g, const OpinionVector& s) {
    const std::size_t n = g.numberOfNodes();
    checkSize(n, s.size(), "opinion vector");

    SparseMatrix system = laplacian(g);
    for (Eigen::Index i = 0; i < system.rows(); ++i) {
        system.coeffRef(i, i) += 1.0;
    }
    system.makeCompressed();

    Eigen::SimplicialLLT<SparseMatrix> llt(system);
    if (llt.info() != Eigen::Success) {
        throw SolverError("Cholesky factorization of I + L failed");
    }

    EquilibriumResult result;
    result.model = Model::Basic;
    result.z = refinedSolve(llt, system, s.values(), result.residual);
    if (!(result.residual <= kResidualTolerance)) {
        std::ostringstream msg;
        msg << "basic solve residual " << result.residual << " exceeds " << kResidualTolerance;
        throw SolverError(msg.str());
    }
    result.outOfRange = countOutOfRange(result.z);
    return result;
}

ExtendedOperator::ExtendedOperator(const Graph& g, const InfluenceMatrix& w,
                                   const SusceptibilityProfile& lambda) {
    const std::size_t n = g.numberOfNodes();
    checkSize(n, lambda.size(), "susceptibility profile");
    if (const auto report = validateInfluence(g, w); !report.ok()) {
        throw InvalidArgument("invalid influence matrix: " + report.describe());
    }
    for (node i = 0; i < n; ++i) {
        if (g.degree(i) == 0) {
            throw IsolatedNodeError(i);
        }
    }

    std::vector<Eigen::Triplet<double>> offDiagonal;
    offDiagonal.reserve(w.entries().size());
    for (const auto& e : w.entries()) {
        if (e.value == 0) {
            continue;
        }
        const double weight = lambda[e.row] * static_cast<double>(e.value) / static_cast<double>(g.degree(e.row));
        if (weight != 0.0) {
            offDiagonal.emplace_back(e.row, e.col, weight);
        }
    }
    const auto dim = static_cast<Eigen::Index>(n);
    influence_.resize(dim, dim);
    influence_.setFromTriplets(offDiagonal.begin(), offDiagonal.end());
    influence_.makeCompressed();

    SparseMatrix identity(dim, dim);
    identity.setIdentity();
    system_ = identity - influence_;
    system_.makeCompressed();

    stubbornness_ = Vector::Ones(dim) - lambda.values();

    auto lu = std::make_shared<SparseLUSolver>();
    if (n > 0) {
        lu->compute(system_);
        if (lu->info() != Eigen::Success) {
            throw SingularSystemError("LU factorization of I - Lambda D^-1 W failed: " + lu->lastErrorMessage(), 0.0);
        }
        const double inverseNorm = estimateInverseNorm1(*lu, dim);
        rcond_ = 1.0 / (columnNorm1(system_) * inverseNorm);
        if (!std::isfinite(rcond_) || rcond_ < kSingularRcond) {
            std::ostringstream msg;
            msg << "I - Lambda D^-1 W is numerically singular (rcond estimate " << rcond_ << ")";
            throw SingularSystemError(msg.str(), std::isfinite(rcond_) ? rcond_ : 0.0);
        }
    } else {
        rcond_ = 1.0;
    }
    lu_ = std::move(lu);
}

EquilibriumResult ExtendedOperator::apply(const OpinionVector& s) const {
    checkSize(dimension(), s.size(), "opinion vector");
    EquilibriumResult result;
    result.model = Model::Extended;
    result.rcond = rcond_;
    if (dimension() == 0) {
        result.z = Vector(0);
        return result;
    }
    const Vector rhs = stubbornness_.cwiseProduct(s.values());
    result.z = refinedSolve(*lu_, system_, rhs, result.residual);
    if (!(result.residual <= kResidualTolerance)) {
        std::ostringstream msg;
        msg << "extended solve residual " << result.residual << " exceeds " << kResidualTolerance
            << " (rcond estimate " << rcond_ << ")";
        throw SingularSystemError(msg.str(), rcond_);
    }
    result.outOfRange = countOutOfRange(result.z);
    return result;
}

EquilibriumResult solveExtended(const Graph& g, const InfluenceMatrix& w,
                                const SusceptibilityProfile& lambda, const OpinionVector& s) {
    return ExtendedOperator(g, w, lambda).apply(s);
}

EquilibriumResult iterateExtended(const Graph& g, const InfluenceMatrix& w,
                                  const SusceptibilityProfile& lambda, const OpinionVector& s,
                                  double tol, std::size_t maxIter) {
    const std::size_t n = g.numberOfNodes();
    checkSize(n, s.size(), "opinion vector");
    checkSize(n, lambda.size(), "susceptibility profile");
    if (!(tol > 0.0)) {
        throw InvalidArgument("iteration tolerance must be positive");
    }
    if (const auto report = validateInfluence(g, w); !report.ok()) {
        throw InvalidArgument("invalid influence matrix: " + report.describe());
    }

    // Per-slot weights lambda_i W_ij / d_i aligned with the adjacency lists.
    std::vector<std::vector<double>> weights(n);
    for (node i = 0; i < n; ++i) {
        const auto nbrs = g.neighbors(i);
        if (nbrs.empty()) {
            throw IsolatedNodeError(i);
        }
        weights[i].reserve(nbrs.size());
        for (node j : nbrs) {
            weights[i].push_back(lambda[i] * w.at(i, j) / static_cast<double>(nbrs.size()));
        }
    }

    const Vector anchor = (Vector::Ones(static_cast<Eigen::Index>(n)) - lambda.values()).cwiseProduct(s.values());
    Vector z = s.values();
    Vector next(z.size());
    double change = 0.0;
    for (std::size_t iter = 1; iter <= maxIter; ++iter) {
        for (node i = 0; i < n; ++i) {
            double acc = 0.0;
            const auto nbrs = g.neighbors(i);
            for (std::size_t k = 0; k < nbrs.size(); ++k) {
                acc += weights[i][k] * z(static_cast<Eigen::Index>(nbrs[k]));
            }
            next(static_cast<Eigen::Index>(i)) = anchor(static_cast<Eigen::Index>(i)) + acc;
        }
        change = maxNorm(next - z);
        z.swap(next);
        if (!std::isfinite(change)) {
            break;
        }
        if (change <= tol) {
            EquilibriumResult result;
            result.model = Model::Extended;
            result.iterations = iter;
            result.z = z;
            // Residual of (I - Lambda D^-1 W) z = (I - Lambda) s, evaluated node by node.
            double residual = 0.0;
            for (node i = 0; i < n; ++i) {
                double acc = 0.0;
                const auto nbrs = g.neighbors(i);
                for (std::size_t k = 0; k < nbrs.size(); ++k) {
                    acc += weights[i][k] * z(static_cast<Eigen::Index>(nbrs[k]));
                }
                residual = std::max(residual, std::abs(z(static_cast<Eigen::Index>(i)) - acc
                                                       - anchor(static_cast<Eigen::Index>(i))));
            }
            result.residual = residual;
            result.outOfRange = countOutOfRange(z);
            return result;
        }
    }
    std::ostringstream msg;
    msg << "fixed-point iteration did not converge in " << maxIter << " sweeps (last change " << change << ")";
    throw NotConvergedError(msg.str(), maxIter, change);
}

} // namespace dissensus
