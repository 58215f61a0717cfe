#include "dissensus/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <ostream>
#include <thread>

#include "dissensus/disruption.hpp"
#include "dissensus/equilibrium.hpp"
#include "dissensus/errors.hpp"
#include "dissensus/perturbation.hpp"

namespace dissensus {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct GridPoint {
    double epsilon = 0.0;
    std::optional<BetaParams> lambda;
    std::vector<BetaParams> opinion;
};

std::vector<GridPoint> expandGrid(const ExperimentSpec& spec) {
    std::vector<std::vector<BetaParams>> opinions = spec.opinion_beta_grid;
    if (opinions.empty()) {
        opinions.push_back(spec.sbm ? spec.sbm->opinion_beta : std::vector<BetaParams>{});
    }
    std::vector<std::optional<BetaParams>> lambdas(spec.lambda_beta_grid.begin(), spec.lambda_beta_grid.end());
    if (lambdas.empty()) {
        if (spec.sbm && spec.susceptibility == SusceptibilityMode::Beta) {
            lambdas.emplace_back(spec.sbm->susceptibility_beta);
        } else {
            lambdas.emplace_back(std::nullopt);
        }
    }
    std::vector<double> epsilons = spec.epsilon_grid;
    if (epsilons.empty()) {
        epsilons.push_back(spec.sbm ? spec.sbm->epsilon : 0.0);
    }

    std::vector<GridPoint> points;
    for (const auto& opinion : opinions) {
        for (const auto& lambda : lambdas) {
            for (double eps : epsilons) {
                points.push_back({eps, lambda, opinion});
            }
        }
    }
    return points;
}

Network buildNetwork(const ExperimentSpec& spec, const GridPoint& point, std::uint64_t seed) {
    if (spec.files) {
        return io::loadNetwork(*spec.files, point.epsilon);
    }
    SbmConfig cfg = *spec.sbm;
    cfg.epsilon = point.epsilon;
    cfg.seed = seed;
    cfg.opinion_beta = point.opinion;
    if (point.lambda) {
        cfg.susceptibility_beta = *point.lambda;
    }
    return generateInstance(cfg, spec.susceptibility).network;
}

void writeReal(std::ostream& out, double value) {
    if (std::isnan(value)) {
        out << "nan";
    } else {
        out << io::formatReal(value);
    }
}

std::string label(const TableRow& row) {
    char buffer[128];
    std::string text;
    if (row.opinion.size() >= 2) {
        std::snprintf(buffer, sizeof(buffer), "op(%g,%g|%g,%g) ", row.opinion[0].alpha, row.opinion[0].beta,
                      row.opinion[1].alpha, row.opinion[1].beta);
        text += buffer;
    }
    if (row.lambda) {
        std::snprintf(buffer, sizeof(buffer), "lam(%g,%g) ", row.lambda->alpha, row.lambda->beta);
        text += buffer;
    }
    std::snprintf(buffer, sizeof(buffer), "eps=%g", row.epsilon);
    return text + buffer;
}

} // namespace

void ExperimentSpec::validate() const {
    if (sbm.has_value() == files.has_value()) {
        throw InvalidArgument("experiment needs exactly one graph source (SBM config or network files)");
    }
    if (repeats == 0) {
        throw InvalidArgument("repeats must be at least 1");
    }
    for (double eps : epsilon_grid) {
        if (!(eps >= 0.0) || !std::isfinite(eps)) {
            throw InvalidArgument("epsilon grid values must be finite and >= 0");
        }
    }
    if (files) {
        if (!lambda_beta_grid.empty() || !opinion_beta_grid.empty()) {
            throw InvalidArgument("opinion and susceptibility grids need an SBM source");
        }
        return;
    }
    if (susceptibility == SusceptibilityMode::Degree && !lambda_beta_grid.empty()) {
        throw InvalidArgument("a susceptibility Beta grid conflicts with degree susceptibility");
    }
    sbm->validate();
    for (const auto& point : expandGrid(*this)) {
        SbmConfig cfg = *sbm;
        cfg.opinion_beta = point.opinion;
        if (point.lambda) {
            cfg.susceptibility_beta = *point.lambda;
        }
        cfg.epsilon = point.epsilon;
        cfg.validate();
    }
}

std::size_t ExperimentSpec::gridSize() const {
    return expandGrid(*this).size();
}

TableRow evaluateNetwork(const Network& net) {
    TableRow row;
    row.innate = kNaN;
    row.basic = kNaN;
    row.extended = kNaN;
    row.manipulated = kNaN;
    row.negativeEdges = net.influence.countNegative() / 2;
    const Graph& g = net.graph;
    try {
        row.innate = disruption(g, net.opinions.values(), StateTag::Innate).disruption;
        row.basic = disruption(g, solveBasic(g, net.opinions).z, StateTag::BasicEq).disruption;
        const ExtendedOperator op(g, net.influence, net.susceptibility);
        row.extended = disruption(g, op.apply(net.opinions).z, StateTag::ExtendedEq).disruption;
        const SweepResult sweep = sweepNodes(op, g, net.opinions, 1);
        row.manipulated = sweep.maxInduced();
        row.bestNode = net.labels.at(sweep.argmax());
    } catch (const SolverError& e) {
        row.status = e.what();
    }
    return row;
}

std::vector<TableRow> runTable(const ExperimentSpec& spec) {
    spec.validate();
    const auto points = expandGrid(spec);
    const std::size_t total = points.size() * spec.repeats;
    std::vector<TableRow> rows(total);
    std::vector<std::exception_ptr> errors(total);

    auto runOne = [&](std::size_t k) {
        const std::size_t p = k / spec.repeats;
        const std::uint64_t seed = spec.seed + k % spec.repeats;
        try {
            TableRow row = evaluateNetwork(buildNetwork(spec, points[p], seed));
            row.point = p;
            row.seed = seed;
            row.epsilon = points[p].epsilon;
            row.lambda = points[p].lambda;
            row.opinion = points[p].opinion;
            rows[k] = std::move(row);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    };

    unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
    if (threads <= 1) {
        for (std::size_t k = 0; k < total; ++k) {
            runOne(k);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> workers;
        for (unsigned t = 0; t < threads; ++t) {
            workers.emplace_back([&] {
                for (std::size_t k = next++; k < total; k = next++) {
                    runOne(k);
                }
            });
        }
    }
    for (const auto& error : errors) {
        if (error) {
            std::rethrow_exception(error);
        }
    }
    return rows;
}

void writeTableCsv(std::ostream& out, const std::vector<TableRow>& rows) {
    out << "point,seed,epsilon,lambda_alpha,lambda_beta,opinion_alpha1,opinion_beta1,opinion_alpha2,opinion_beta2,"
           "I_s,I_basic,I_extended,I_manipulated,best_node,negative_edges,status\n";
    for (const auto& row : rows) {
        out << row.point << ',' << row.seed << ',' << io::formatReal(row.epsilon) << ',';
        if (row.lambda) {
            out << io::formatReal(row.lambda->alpha) << ',' << io::formatReal(row.lambda->beta) << ',';
        } else {
            out << ",,";
        }
        for (std::size_t c = 0; c < 2; ++c) {
            if (c < row.opinion.size()) {
                out << io::formatReal(row.opinion[c].alpha) << ',' << io::formatReal(row.opinion[c].beta) << ',';
            } else {
                out << ",,";
            }
        }
        writeReal(out, row.innate);
        out << ',';
        writeReal(out, row.basic);
        out << ',';
        writeReal(out, row.extended);
        out << ',';
        writeReal(out, row.manipulated);
        out << ',' << row.bestNode.value_or("") << ',' << row.negativeEdges << ',';
        // Keep the CSV one line per row whatever the error text contains.
        std::string status = row.status;
        for (char& ch : status) {
            if (ch == ',' || ch == '\n' || ch == '\r') {
                ch = ';';
            }
        }
        out << status << '\n';
    }
}

void writeTablePretty(std::ostream& out, const std::vector<TableRow>& rows) {
    struct Sums {
        const TableRow* first = nullptr;
        double innate = 0, basic = 0, extended = 0, manipulated = 0;
        std::size_t ok = 0, failed = 0;
    };
    std::map<std::size_t, Sums> byPoint;
    for (const auto& row : rows) {
        Sums& s = byPoint[row.point];
        if (!s.first) {
            s.first = &row;
        }
        if (!row.ok()) {
            ++s.failed;
            continue;
        }
        s.innate += row.innate;
        s.basic += row.basic;
        s.extended += row.extended;
        s.manipulated += row.manipulated;
        ++s.ok;
    }
    char buffer[256];
    std::snprintf(buffer, sizeof(buffer), "%-40s %12s %12s %12s %12s %6s\n", "setting", "innate", "basic", "extended",
                  "manipulated", "runs");
    out << buffer;
    for (const auto& [point, s] : byPoint) {
        const double k = s.ok ? static_cast<double>(s.ok) : kNaN;
        std::snprintf(buffer, sizeof(buffer), "%-40s %12.2f %12.2f %12.2f %12.2f %3zu/%-2zu\n", label(*s.first).c_str(),
                      s.innate / k, s.basic / k, s.extended / k, s.manipulated / k, s.ok, s.ok + s.failed);
        out << buffer;
    }
}

io::json toJson(const TableRow& row) {
    auto real = [](double v) { return std::isnan(v) ? io::json(nullptr) : io::json(v); };
    io::json doc{{"point", row.point},
                 {"seed", row.seed},
                 {"epsilon", row.epsilon},
                 {"I_s", real(row.innate)},
                 {"I_basic", real(row.basic)},
                 {"I_extended", real(row.extended)},
                 {"I_manipulated", real(row.manipulated)},
                 {"negative_edges", row.negativeEdges},
                 {"status", row.status}};
    if (row.lambda) {
        doc["lambda_beta"] = {row.lambda->alpha, row.lambda->beta};
    }
    if (!row.opinion.empty()) {
        io::json beta = io::json::array();
        for (const auto& p : row.opinion) {
            beta.push_back(p.alpha);
            beta.push_back(p.beta);
        }
        doc["opinion_beta"] = beta;
    }
    doc["best_node"] = row.bestNode ? io::json(*row.bestNode) : io::json(nullptr);
    return doc;
}

ExperimentSpec experimentSpecFromJson(const io::json& doc) {
    if (!doc.is_object()) {
        throw InvalidArgument("experiment spec must be a JSON object");
    }
    static const std::set<std::string> known{"sbm",          "input", "susceptibility", "epsilon_grid",
                                             "lambda_beta_grid", "opinion_beta_grid", "repeats", "seed",
                                             "out_dir",      "threads"};
    for (const auto& item : doc.items()) {
        if (!known.contains(item.key())) {
            throw InvalidArgument("unknown experiment field '" + item.key() + "'");
        }
    }
    ExperimentSpec spec;
    try {
        if (doc.contains("sbm")) {
            spec.sbm = io::sbmConfigFromJson(doc.at("sbm"));
        }
        if (doc.contains("input")) {
            spec.files = io::networkFilesIn(doc.at("input").get<std::string>());
        }
        if (doc.contains("susceptibility")) {
            const auto mode = doc.at("susceptibility").get<std::string>();
            if (mode == "beta") {
                spec.susceptibility = SusceptibilityMode::Beta;
            } else if (mode == "degree") {
                spec.susceptibility = SusceptibilityMode::Degree;
            } else {
                throw InvalidArgument("susceptibility must be 'beta' or 'degree'");
            }
        }
        if (doc.contains("epsilon_grid")) {
            spec.epsilon_grid = doc.at("epsilon_grid").get<std::vector<double>>();
        }
        if (doc.contains("lambda_beta_grid")) {
            for (const auto& pair : doc.at("lambda_beta_grid").get<std::vector<std::vector<double>>>()) {
                if (pair.size() != 2) {
                    throw InvalidArgument("lambda_beta_grid entries must be [alpha, beta]");
                }
                spec.lambda_beta_grid.push_back({pair[0], pair[1]});
            }
        }
        if (doc.contains("opinion_beta_grid")) {
            for (const auto& flat : doc.at("opinion_beta_grid").get<std::vector<std::vector<double>>>()) {
                if (flat.empty() || flat.size() % 2 != 0) {
                    throw InvalidArgument("opinion_beta_grid entries must be [a1, b1, a2, b2, ...]");
                }
                std::vector<BetaParams> entry;
                for (std::size_t i = 0; i < flat.size(); i += 2) {
                    entry.push_back({flat[i], flat[i + 1]});
                }
                spec.opinion_beta_grid.push_back(std::move(entry));
            }
        }
        if (doc.contains("repeats")) {
            spec.repeats = doc.at("repeats").get<std::size_t>();
        }
        if (doc.contains("seed")) {
            spec.seed = doc.at("seed").get<std::uint64_t>();
        }
        if (doc.contains("out_dir")) {
            spec.out_dir = doc.at("out_dir").get<std::string>();
        }
        if (doc.contains("threads")) {
            spec.threads = doc.at("threads").get<unsigned>();
        }
    } catch (const io::json::exception& e) {
        throw InvalidArgument(std::string("experiment spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

} // namespace dissensus
