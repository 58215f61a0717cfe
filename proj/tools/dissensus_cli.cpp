#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dissensus/campaign.hpp"
#include "dissensus/centrality.hpp"
#include "dissensus/disruption.hpp"
#include "dissensus/equilibrium.hpp"
#include "dissensus/errors.hpp"
#include "dissensus/experiment.hpp"
#include "dissensus/io.hpp"
#include "dissensus/netgen.hpp"
#include "dissensus/network.hpp"
#include "dissensus/perturbation.hpp"

namespace fs = std::filesystem;
using namespace dissensus;
using io::json;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kConfig = 2, kIo = 3, kSolver = 4 };

struct Globals {
    std::optional<std::uint64_t> seed;
    std::string outDir;
    std::string format = "csv";
};

// Writes to out-dir/name when an output directory is given, to stdout otherwise.
void emit(const Globals& g, const std::string& name, const std::string& contents) {
    if (g.outDir.empty()) {
        std::cout << contents;
        return;
    }
    io::writeFile(fs::path(g.outDir) / name, contents);
}

bool wantJson(const Globals& g) {
    return g.format == "json";
}

Network loadInput(const std::string& dir, double epsilon) {
    if (!fs::is_directory(dir)) {
        throw IoError("input '" + dir + "' is not a directory");
    }
    return io::loadNetwork(io::networkFilesIn(dir), epsilon);
}

node findNode(const Network& net, const std::string& label) {
    auto it = std::find(net.labels.begin(), net.labels.end(), label);
    if (it == net.labels.end()) {
        throw InvalidArgument("unknown node '" + label + "'");
    }
    return static_cast<node>(it - net.labels.begin());
}

json parseJsonFile(const std::string& path) {
    const std::string text = io::readFile(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

SusceptibilityMode parseMode(const std::string& name) {
    return name == "degree" ? SusceptibilityMode::Degree : SusceptibilityMode::Beta;
}

// gen

struct GenOptions {
    std::string config;
    std::vector<std::size_t> sizes;
    std::optional<double> pIntra;
    std::optional<double> pInter;
    std::optional<double> epsilon;
    std::string susceptibility = "beta";
    bool fixture = false;
};

int runGen(const Globals& globals, const GenOptions& opt) {
    if (globals.outDir.empty()) {
        throw InvalidArgument("gen needs --out-dir");
    }
    if (opt.fixture) {
        io::saveNetwork(conflictingHubsExample(), globals.outDir);
        std::cout << json{{"fixture", "conflicting-hubs"}, {"nodes", 6}}.dump(2) << '\n';
        return kOk;
    }
    SbmConfig cfg = opt.config.empty() ? SbmConfig{} : io::sbmConfigFromJson(parseJsonFile(opt.config));
    if (!opt.sizes.empty()) {
        cfg.community_sizes = opt.sizes;
    }
    if (opt.pIntra) {
        cfg.p_intra = *opt.pIntra;
    }
    if (opt.pInter) {
        cfg.p_inter = *opt.pInter;
    }
    if (opt.epsilon) {
        cfg.epsilon = *opt.epsilon;
    }
    if (globals.seed) {
        cfg.seed = *globals.seed;
    }
    cfg.validate();
    const SyntheticInstance inst = generateInstance(cfg, parseMode(opt.susceptibility));
    io::saveNetwork(inst.network, globals.outDir);
    json echo = io::toJson(cfg);
    echo["susceptibility"] = opt.susceptibility;
    std::cout << echo.dump(2) << '\n';
    return kOk;
}

// table

struct TableOptions {
    std::string spec;
    std::string input;
    std::vector<double> epsilons;
    std::optional<std::size_t> repeats;
    unsigned threads = 0;
    bool pretty = false;
};

int runTableCmd(const Globals& globals, const TableOptions& opt) {
    ExperimentSpec spec;
    if (!opt.spec.empty()) {
        spec = experimentSpecFromJson(parseJsonFile(opt.spec));
    } else if (!opt.input.empty()) {
        spec.files = io::networkFilesIn(opt.input);
    } else {
        spec.sbm = SbmConfig{};
    }
    if (!opt.epsilons.empty()) {
        spec.epsilon_grid = opt.epsilons;
    }
    if (opt.repeats) {
        spec.repeats = *opt.repeats;
    }
    if (globals.seed) {
        spec.seed = *globals.seed;
    }
    if (opt.threads) {
        spec.threads = opt.threads;
    }
    Globals out = globals;
    if (out.outDir.empty() && !spec.out_dir.empty()) {
        out.outDir = spec.out_dir.string();
    }
    const auto rows = runTable(spec);

    std::ostringstream text;
    if (opt.pretty) {
        writeTablePretty(text, rows);
        emit(out, "table.txt", text.str());
    } else if (wantJson(out)) {
        json doc = json::array();
        for (const auto& row : rows) {
            doc.push_back(toJson(row));
        }
        emit(out, "table.json", doc.dump(2) + "\n");
    } else {
        writeTableCsv(text, rows);
        emit(out, "table.csv", text.str());
    }
    for (const auto& row : rows) {
        if (!row.ok()) {
            std::cerr << "point " << row.point << " seed " << row.seed << ": " << row.status << '\n';
        }
    }
    return kOk;
}

// solve

struct InputOptions {
    std::string input;
    double epsilon = 0.0;
};

struct SolveOptions {
    std::string model = "extended";
    std::optional<double> iterateTol;
    std::size_t maxIter = 100000;
};

int runSolve(const Globals& globals, const InputOptions& in, const SolveOptions& opt) {
    const Network net = loadInput(in.input, in.epsilon);
    EquilibriumResult result;
    if (opt.model == "basic") {
        result = solveBasic(net.graph, net.opinions);
    } else if (opt.iterateTol) {
        result = iterateExtended(net.graph, net.influence, net.susceptibility, net.opinions, *opt.iterateTol,
                                 opt.maxIter);
    } else {
        result = solveExtended(net.graph, net.influence, net.susceptibility, net.opinions);
    }
    if (result.outOfRange > 0) {
        std::cerr << "note: " << result.outOfRange << " equilibrium entries lie outside [-1, 1]\n";
    }
    if (wantJson(globals)) {
        json doc = io::toJson(result, true);
        doc["nodes"] = net.labels;
        emit(globals, "equilibrium.json", doc.dump(2) + "\n");
    } else {
        std::ostringstream text;
        io::writeEquilibriumCsv(text, result, net.labels);
        emit(globals, "equilibrium.csv", text.str());
    }
    return kOk;
}

// disrupt

int runDisrupt(const Globals& globals, const InputOptions& in, bool manipulate) {
    const Network net = loadInput(in.input, in.epsilon);
    const Graph& g = net.graph;
    std::vector<DisruptionReport> reports;
    reports.push_back(disruption(g, net.opinions.values(), StateTag::Innate));
    reports.push_back(disruption(g, solveBasic(g, net.opinions).z, StateTag::BasicEq));
    const ExtendedOperator op(g, net.influence, net.susceptibility);
    reports.push_back(disruption(g, op.apply(net.opinions).z, StateTag::ExtendedEq));
    std::optional<PerturbationPlan> plan;
    if (manipulate) {
        const SweepResult sweep = sweepNodes(op, g, net.opinions);
        plan = sweep.plans[sweep.argmax()];
        reports.push_back(disruption(g, op.apply(plan->sPrime).z, StateTag::Manipulated));
    }
    if (wantJson(globals)) {
        json doc = json::array();
        for (const auto& r : reports) {
            doc.push_back(io::toJson(r));
        }
        json wrapped{{"reports", doc}};
        if (plan) {
            wrapped["plan"] = io::toJson(*plan, net.labels);
        }
        emit(globals, "disruption.json", wrapped.dump(2) + "\n");
    } else {
        std::ostringstream text;
        io::writeDisruptionCsv(text, reports);
        emit(globals, "disruption.csv", text.str());
    }
    return kOk;
}

// perturb

struct PerturbOptions {
    std::string node;
    std::size_t grid = 0;
};

int runPerturb(const Globals& globals, const InputOptions& in, const PerturbOptions& opt) {
    const Network net = loadInput(in.input, in.epsilon);
    const node u = findNode(net, opt.node);
    const ExtendedOperator op(net.graph, net.influence, net.susceptibility);
    const PerturbationPlan plan = bestAlpha(op, net.graph, net.opinions, u);
    json doc = io::toJson(plan, net.labels);
    std::optional<GridCheckResult> grid;
    if (opt.grid > 0) {
        grid = gridCheck(op, net.graph, net.opinions, u, opt.grid);
        doc["grid_points"] = opt.grid;
        doc["grid_max"] = grid->maxObjective;
        doc["grid_argmax_alpha"] = grid->argmaxAlpha;
    }
    if (wantJson(globals)) {
        emit(globals, "perturb.json", doc.dump(2) + "\n");
        return kOk;
    }
    std::ostringstream text;
    if (grid) {
        text << "alpha,objective\n";
        for (std::size_t i = 0; i < grid->alphas.size(); ++i) {
            text << io::formatReal(grid->alphas[i]) << ',' << io::formatReal(grid->objectives[i]) << '\n';
        }
        std::cerr << doc.dump() << '\n';
        emit(globals, "perturb_grid.csv", text.str());
    } else {
        text << "node,alpha,s_prime_u,objective_low,objective_high,objective,chosen\n"
             << net.labels[u] << ',' << io::formatReal(plan.alpha) << ',' << io::formatReal(plan.targetOpinion())
             << ',' << io::formatReal(plan.objectiveLow) << ',' << io::formatReal(plan.objectiveHigh) << ','
             << io::formatReal(plan.objective()) << ',' << toString(plan.chosen) << '\n';
        emit(globals, "perturb.csv", text.str());
    }
    return kOk;
}

// sweep

int runSweep(const Globals& globals, const InputOptions& in, unsigned threads) {
    const Network net = loadInput(in.input, in.epsilon);
    const SweepResult sweep = sweepNodes(net.graph, net.influence, net.susceptibility, net.opinions, threads);
    if (wantJson(globals)) {
        json plans = json::array();
        for (std::size_t i = 0; i < sweep.plans.size(); ++i) {
            json p = io::toJson(sweep.plans[i], net.labels);
            p["normalized"] = sweep.normalized[i];
            plans.push_back(p);
        }
        json doc{{"baseline", sweep.baseline}, {"best_node", net.labels[sweep.argmax()]}, {"plans", plans}};
        emit(globals, "sweep.json", doc.dump(2) + "\n");
    } else {
        std::ostringstream text;
        io::writeSweepCsv(text, sweep, net.labels);
        emit(globals, "sweep.csv", text.str());
    }
    return kOk;
}

// analyze

int runAnalyze(const Globals& globals, const InputOptions& in, const std::string& measure, unsigned threads) {
    const Network net = loadInput(in.input, in.epsilon);
    const SweepResult sweep = sweepNodes(net.graph, net.influence, net.susceptibility, net.opinions, threads);

    std::vector<CentralityMeasure> measures;
    if (measure == "all") {
        measures = {CentralityMeasure::Degree, CentralityMeasure::Betweenness, CentralityMeasure::Eigenvector};
    } else {
        measures = {parseCentralityMeasure(measure)};
    }
    std::vector<CentralityVector> vectors;
    std::vector<CorrelationReport> reports;
    std::vector<std::string> skipped;
    for (auto m : measures) {
        vectors.push_back(centrality(net.graph, m));
        try {
            reports.push_back(correlateDisruption(vectors.back(), sweep));
        } catch (const ConstantInputError&) {
            skipped.emplace_back(toString(m));
        }
    }
    if (!skipped.empty()) {
        std::cerr << "no correlation computable for:";
        for (const auto& s : skipped) {
            std::cerr << ' ' << s;
        }
        std::cerr << " (constant series)\n";
    }
    if (!globals.outDir.empty()) {
        std::ostringstream points;
        io::writeCentralityCsv(points, vectors, sweep, net.labels);
        io::writeFile(fs::path(globals.outDir) / "centrality.csv", points.str());
    }
    if (wantJson(globals)) {
        json doc = json::array();
        for (const auto& r : reports) {
            doc.push_back(io::toJson(r));
        }
        json wrapped{{"correlations", doc}, {"not_computable", skipped}};
        if (reports.empty()) {
            wrapped["note"] = "no correlation computable";
        }
        emit(globals, "correlation.json", wrapped.dump(2) + "\n");
    } else {
        std::ostringstream text;
        io::writeCorrelationCsv(text, reports);
        emit(globals, "correlation.csv", text.str());
    }
    if (reports.empty()) {
        std::cout << "no correlation computable\n";
    }
    return kOk;
}

// campaign

struct CampaignOptions {
    std::string config;
    std::optional<double> target;
    std::optional<double> sigma;
    std::optional<double> epsStop;
    std::optional<std::size_t> maxSteps;
    std::optional<double> driftBudget;
    std::string generator = "reference";
    double stepScale = 0.2;
    std::string input;
    std::string node;
    double epsilon = 0.0;
};

int runCampaignCmd(const Globals& globals, const CampaignOptions& opt) {
    CampaignConfig cfg = opt.config.empty() ? CampaignConfig{} : io::campaignConfigFromJson(parseJsonFile(opt.config));
    if (globals.seed) {
        cfg.seed = *globals.seed;
    }

    // With a network, the target defaults to the stance chosen by the perturbation plan.
    std::optional<Network> net;
    std::optional<PerturbationPlan> plan;
    std::unique_ptr<ExtendedOperator> op;
    if (!opt.input.empty()) {
        net = loadInput(opt.input, opt.epsilon);
        op = std::make_unique<ExtendedOperator>(net->graph, net->influence, net->susceptibility);
        if (opt.node.empty()) {
            const SweepResult sweep = sweepNodes(*op, net->graph, net->opinions);
            plan = sweep.plans[sweep.argmax()];
        } else {
            plan = bestAlpha(*op, net->graph, net->opinions, findNode(*net, opt.node));
        }
        cfg.target = plan->targetOpinion();
    }
    if (opt.target) {
        cfg.target = *opt.target;
    }
    if (opt.sigma) {
        cfg.sigma = *opt.sigma;
    }
    if (opt.epsStop) {
        cfg.eps_stop = *opt.epsStop;
    }
    if (opt.maxSteps) {
        cfg.max_steps = *opt.maxSteps;
    }
    if (opt.driftBudget) {
        cfg.drift_budget = *opt.driftBudget;
    }
    cfg.validate();

    std::unique_ptr<StanceGenerator> generator;
    if (opt.generator == "always-target") {
        generator = std::make_unique<FixedStanceGenerator>(cfg.target);
    } else {
        generator = std::make_unique<ReferenceGenerator>(cfg.seed, opt.stepScale);
    }
    const CampaignTrace trace = runCampaign(cfg, *generator);

    json doc = io::toJson(trace, cfg);
    doc["generator"] = opt.generator;
    if (plan) {
        doc["plan"] = io::toJson(*plan, net->labels);
        if (trace.converged()) {
            const double achieved = endToEndDisruption(*op, net->graph, *plan, trace);
            doc["end_to_end_disruption"] = achieved;
            doc["end_to_end_ratio"] = achieved / plan->objective();
        }
    }

    std::ostringstream traceCsv;
    io::writeTraceCsv(traceCsv, trace);
    if (!globals.outDir.empty()) {
        io::writeFile(fs::path(globals.outDir) / "trace.csv", traceCsv.str());
        io::writeFile(fs::path(globals.outDir) / "campaign.json", doc.dump(2) + "\n");
    }
    if (wantJson(globals) || !globals.outDir.empty()) {
        std::cout << doc.dump(2) << '\n';
    } else {
        std::cout << traceCsv.str();
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Opinion dynamics disruption toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals globals;
    app.add_option("--seed", globals.seed, "Seed for every random stream");
    app.add_option("--out-dir", globals.outDir, "Write outputs into this directory instead of stdout");
    app.add_option("--format", globals.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    GenOptions gen;
    auto* genCmd = app.add_subcommand("gen", "Generate a synthetic SBM network");
    genCmd->add_option("--config", gen.config, "SBM config JSON")->check(CLI::ExistingFile);
    genCmd->add_option("--sizes", gen.sizes, "Community sizes");
    genCmd->add_option("--p-intra", gen.pIntra, "Edge probability inside a community");
    genCmd->add_option("--p-inter", gen.pInter, "Edge probability across communities");
    genCmd->add_option("--epsilon", gen.epsilon, "Threshold of the repulsive-edge rule");
    genCmd->add_option("--susceptibility", gen.susceptibility)->check(CLI::IsMember({"beta", "degree"}));
    genCmd->add_flag("--fixture", gen.fixture, "Write the six-node conflicting-hubs example");

    TableOptions table;
    auto* tableCmd = app.add_subcommand("table", "Disruption table over a grid of settings");
    tableCmd->add_option("--spec", table.spec, "Experiment spec JSON")->check(CLI::ExistingFile);
    tableCmd->add_option("--input", table.input, "Network directory (grid of one)");
    tableCmd->add_option("--epsilon", table.epsilons, "Epsilon grid");
    tableCmd->add_option("--repeats", table.repeats, "Seeds per grid point");
    tableCmd->add_option("--threads", table.threads);
    tableCmd->add_flag("--pretty", table.pretty, "Per-point means rounded to two decimals");
    tableCmd->get_option("--spec")->excludes(tableCmd->get_option("--input"));

    auto addInput = [](CLI::App* cmd, InputOptions& in) {
        cmd->add_option("--input", in.input, "Network directory")->required();
        cmd->add_option("--epsilon", in.epsilon, "Threshold for influence signs missing from the input");
    };

    InputOptions solveIn;
    SolveOptions solve;
    auto* solveCmd = app.add_subcommand("solve", "Equilibrium opinions");
    addInput(solveCmd, solveIn);
    solveCmd->add_option("--model", solve.model)->check(CLI::IsMember({"basic", "extended"}));
    solveCmd->add_option("--iterate", solve.iterateTol, "Use fixed-point iteration with this tolerance");
    solveCmd->add_option("--max-iter", solve.maxIter);

    InputOptions disruptIn;
    bool manipulate = false;
    auto* disruptCmd = app.add_subcommand("disrupt", "Polarization, disagreement and disruption per state");
    addInput(disruptCmd, disruptIn);
    disruptCmd->add_flag("--manipulated", manipulate, "Add the best single-node manipulation");

    InputOptions perturbIn;
    PerturbOptions perturb;
    auto* perturbCmd = app.add_subcommand("perturb", "Best opinion shift for one node");
    addInput(perturbCmd, perturbIn);
    perturbCmd->add_option("--node", perturb.node, "Node ID")->required();
    perturbCmd->add_option("--grid", perturb.grid, "Also evaluate an alpha grid with this many points")
        ->check(CLI::Range(3, 1000000));

    InputOptions sweepIn;
    unsigned sweepThreads = 0;
    auto* sweepCmd = app.add_subcommand("sweep", "Best shift for every node");
    addInput(sweepCmd, sweepIn);
    sweepCmd->add_option("--threads", sweepThreads);

    InputOptions analyzeIn;
    std::string measure = "all";
    unsigned analyzeThreads = 0;
    auto* analyzeCmd = app.add_subcommand("analyze", "Correlate centrality with induced disruption");
    addInput(analyzeCmd, analyzeIn);
    analyzeCmd->add_option("--measure", measure)
        ->check(CLI::IsMember({"all", "degree", "betweenness", "eigenvector"}));
    analyzeCmd->add_option("--threads", analyzeThreads);

    CampaignOptions campaign;
    auto* campaignCmd = app.add_subcommand("campaign", "Run the content-generation loop");
    campaignCmd->add_option("--config", campaign.config, "Campaign config JSON")->check(CLI::ExistingFile);
    campaignCmd->add_option("--target", campaign.target);
    campaignCmd->add_option("--sigma", campaign.sigma);
    campaignCmd->add_option("--eps-stop", campaign.epsStop);
    campaignCmd->add_option("--max-steps", campaign.maxSteps);
    campaignCmd->add_option("--drift-budget", campaign.driftBudget);
    campaignCmd->add_option("--generator", campaign.generator)
        ->check(CLI::IsMember({"reference", "always-target"}));
    campaignCmd->add_option("--step-scale", campaign.stepScale, "Proposal spread of the reference generator");
    campaignCmd->add_option("--input", campaign.input, "Network directory for end-to-end evaluation");
    campaignCmd->add_option("--node", campaign.node, "Node to manipulate (default: best node of a sweep)");
    campaignCmd->add_option("--epsilon", campaign.epsilon);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        if (*genCmd) return runGen(globals, gen);
        if (*tableCmd) return runTableCmd(globals, table);
        if (*solveCmd) return runSolve(globals, solveIn, solve);
        if (*disruptCmd) return runDisrupt(globals, disruptIn, manipulate);
        if (*perturbCmd) return runPerturb(globals, perturbIn, perturb);
        if (*sweepCmd) return runSweep(globals, sweepIn, sweepThreads);
        if (*analyzeCmd) return runAnalyze(globals, analyzeIn, measure, analyzeThreads);
        if (*campaignCmd) return runCampaignCmd(globals, campaign);
    } catch (const InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return kSolver;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kOther;
    }
    return kOther;
}
