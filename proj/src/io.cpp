#include "dissensus/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dissensus/errors.hpp"

namespace dissensus::io {

std::string formatReal(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

node NodeIndex::intern(const std::string& label) {
    auto [it, inserted] = index_.try_emplace(label, labels_.size());
    if (inserted) {
        labels_.push_back(label);
    }
    return it->second;
}

std::optional<node> NodeIndex::find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> splitComma(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) {
        fields.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

[[noreturn]] void parseError(std::size_t line, const std::string& what) {
    throw IoError("line " + std::to_string(line) + ": " + what);
}

double parseReal(const std::string& text, std::size_t line) {
    if (text.empty()) {
        parseError(line, "missing number");
    }
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || errno == ERANGE) {
        parseError(line, "'" + text + "' is not a number");
    }
    return value;
}

std::ifstream openInput(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return in;
}

std::ofstream openOutput(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

template <typename T>
T field(const json& doc, const char* key, T fallback) {
    if (!doc.contains(key)) {
        return fallback;
    }
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("field '") + key + "': " + e.what());
    }
}

void rejectUnknown(const json& doc, const std::set<std::string>& known, const char* what) {
    if (!doc.is_object()) {
        throw InvalidArgument(std::string(what) + " must be a JSON object");
    }
    for (const auto& item : doc.items()) {
        if (!known.contains(item.key())) {
            throw InvalidArgument(std::string("unknown ") + what + " field '" + item.key() + "'");
        }
    }
}

} // namespace

std::vector<RawEdge> readEdgeList(std::istream& in) {
    std::vector<RawEdge> edges;
    std::string line;
    std::size_t lineNo = 0;
    bool weighted = false;
    std::set<std::pair<std::string, std::string>> seen;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        std::istringstream tokens(text);
        std::vector<std::string> parts;
        for (std::string token; tokens >> token;) {
            parts.push_back(token);
        }
        if (parts.size() < 2 || parts.size() > 3) {
            parseError(lineNo, "expected two node IDs and an optional weight");
        }
        if (parts.size() == 3) {
            weighted = true;
            if (parseReal(parts[2], lineNo) != 1.0) {
                parseError(lineNo, "weighted adjacency is not supported (weight " + parts[2] + ")");
            }
        }
        edges.push_back({parts[0], parts[1], lineNo});
    }
    if (weighted) {
        for (const auto& e : edges) {
            auto key = std::minmax(e.u, e.v);
            if (!seen.insert({key.first, key.second}).second) {
                parseError(e.line, "multi-edge " + e.u + " " + e.v + " in a weighted edge list");
            }
        }
    }
    return edges;
}

void writeEdgeList(std::ostream& out, const Graph& g, const std::vector<std::string>& labels) {
    out << "# dissensus edge list: " << g.numberOfNodes() << " nodes, " << g.numberOfEdges() << " edges\n";
    for (const auto& e : g.edges()) {
        out << labels.at(e.u) << ' ' << labels.at(e.v) << '\n';
    }
}

std::vector<std::pair<std::string, double>> readNodeValues(std::istream& in, const std::string& header) {
    std::vector<std::pair<std::string, double>> rows;
    std::string line;
    std::size_t lineNo = 0;
    bool sawHeader = false;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        if (!sawHeader) {
            if (text != header) {
                parseError(lineNo, "expected header '" + header + "', got '" + text + "'");
            }
            sawHeader = true;
            continue;
        }
        const auto fields = splitComma(text);
        if (fields.size() != 2 || fields[0].empty()) {
            parseError(lineNo, "expected '<node>,<value>'");
        }
        rows.emplace_back(fields[0], parseReal(fields[1], lineNo));
    }
    if (!sawHeader) {
        throw IoError("missing header '" + header + "'");
    }
    return rows;
}

void writeNodeValues(std::ostream& out, const std::string& header, const std::vector<std::string>& labels,
                     const Vector& values) {
    out << header << '\n';
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        out << labels.at(static_cast<std::size_t>(i)) << ',' << formatReal(values(i)) << '\n';
    }
}

std::vector<RawSign> readInfluence(std::istream& in) {
    std::vector<RawSign> rows;
    std::string line;
    std::size_t lineNo = 0;
    bool sawHeader = false;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        if (!sawHeader) {
            if (text != "src,dst,sign") {
                parseError(lineNo, "expected header 'src,dst,sign'");
            }
            sawHeader = true;
            continue;
        }
        const auto fields = splitComma(text);
        if (fields.size() != 3) {
            parseError(lineNo, "expected '<src>,<dst>,<sign>'");
        }
        const double sign = parseReal(fields[2], lineNo);
        if (sign != 1.0 && sign != -1.0) {
            parseError(lineNo, "sign must be -1 or 1");
        }
        rows.push_back({fields[0], fields[1], static_cast<int>(sign), lineNo});
    }
    if (!sawHeader) {
        throw IoError("missing header 'src,dst,sign'");
    }
    return rows;
}

void writeInfluence(std::ostream& out, const Graph& g, const InfluenceMatrix& w,
                    const std::vector<std::string>& labels) {
    out << "src,dst,sign\n";
    for (const auto& e : g.edges()) {
        out << labels.at(e.u) << ',' << labels.at(e.v) << ',' << w.at(e.u, e.v) << '\n';
    }
}

NetworkFiles networkFilesIn(const std::filesystem::path& dir) {
    return {dir / "edges.txt", dir / "opinions.csv", dir / "lambda.csv", dir / "influence.csv"};
}

Network loadNetwork(const NetworkFiles& files, double epsilon) {
    NodeIndex index;
    std::vector<double> opinionValues;
    {
        auto in = openInput(files.opinions);
        for (const auto& [label, value] : readNodeValues(in, "node,opinion")) {
            if (index.find(label)) {
                throw IoError(files.opinions.string() + ": node '" + label + "' listed twice");
            }
            index.intern(label);
            opinionValues.push_back(value);
        }
    }
    const std::size_t n = index.size();

    std::vector<Edge> edges;
    {
        auto in = openInput(files.edges);
        std::vector<RawEdge> raw;
        try {
            raw = readEdgeList(in);
        } catch (const IoError& e) {
            throw IoError(files.edges.string() + ": " + e.what());
        }
        edges.reserve(raw.size());
        for (const auto& e : raw) {
            const auto u = index.find(e.u);
            const auto v = index.find(e.v);
            if (!u || !v) {
                throw IoError(files.edges.string() + ": line " + std::to_string(e.line) + " references node '"
                              + (u ? e.v : e.u) + "' with no opinion");
            }
            edges.push_back({*u, *v});
        }
    }

    Network net;
    net.graph = Graph::build(n, edges);
    net.labels = index.labels();
    net.opinions = OpinionVector(std::span<const double>(opinionValues));

    if (files.susceptibility && std::filesystem::exists(*files.susceptibility)) {
        auto in = openInput(*files.susceptibility);
        Vector lambda = Vector::Constant(static_cast<Eigen::Index>(n), std::numeric_limits<double>::quiet_NaN());
        for (const auto& [label, value] : readNodeValues(in, "node,lambda")) {
            const auto u = index.find(label);
            if (!u) {
                throw IoError(files.susceptibility->string() + ": unknown node '" + label + "'");
            }
            lambda(static_cast<Eigen::Index>(*u)) = value;
        }
        for (Eigen::Index i = 0; i < lambda.size(); ++i) {
            if (std::isnan(lambda(i))) {
                throw IoError(files.susceptibility->string() + ": no lambda for node '"
                              + net.labels[static_cast<std::size_t>(i)] + "'");
            }
        }
        net.susceptibility = SusceptibilityProfile(std::move(lambda));
    } else {
        net.susceptibility = degreeSusceptibility(net.graph);
    }

    std::vector<int> signs = deriveInfluence(net.graph, net.opinions, epsilon).edgeSigns(net.graph);
    if (files.influence && std::filesystem::exists(*files.influence)) {
        auto in = openInput(*files.influence);
        std::vector<int> given(signs.size(), 0);
        for (const auto& row : readInfluence(in)) {
            const auto u = index.find(row.src);
            const auto v = index.find(row.dst);
            const std::size_t k = (u && v) ? net.graph.edgeIndex(*u, *v) : net.graph.numberOfEdges();
            if (k == net.graph.numberOfEdges()) {
                throw IoError(files.influence->string() + ": line " + std::to_string(row.line) + " is not an edge");
            }
            if (given[k] != 0 && given[k] != row.sign) {
                throw IoError(files.influence->string() + ": line " + std::to_string(row.line)
                              + " contradicts an earlier sign for the same edge");
            }
            given[k] = row.sign;
            signs[k] = row.sign;
        }
    }
    net.influence = InfluenceMatrix::fromEdgeSigns(net.graph, signs);
    return net;
}

void saveNetwork(const Network& net, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto files = networkFilesIn(dir);
    {
        auto out = openOutput(files.edges);
        writeEdgeList(out, net.graph, net.labels);
    }
    {
        auto out = openOutput(files.opinions);
        writeNodeValues(out, "node,opinion", net.labels, net.opinions.values());
    }
    {
        auto out = openOutput(*files.susceptibility);
        writeNodeValues(out, "node,lambda", net.labels, net.susceptibility.values());
    }
    {
        auto out = openOutput(*files.influence);
        writeInfluence(out, net.graph, net.influence, net.labels);
    }
}

std::string readFile(const std::filesystem::path& path) {
    auto in = openInput(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void writeFile(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    auto out = openOutput(path);
    out << contents;
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

void writeDisruptionCsv(std::ostream& out, const std::vector<DisruptionReport>& reports) {
    out << "state_tag,polarization,disagreement,disruption\n";
    for (const auto& r : reports) {
        out << toString(r.tag) << ',' << formatReal(r.polarization) << ',' << formatReal(r.disagreement) << ','
            << formatReal(r.disruption) << '\n';
    }
}

void writeSweepCsv(std::ostream& out, const SweepResult& sweep, const std::vector<std::string>& labels) {
    out << "node,alpha,s_prime_u,objective_low,objective_high,induced_disruption,normalized\n";
    for (std::size_t i = 0; i < sweep.plans.size(); ++i) {
        const auto& plan = sweep.plans[i];
        out << labels.at(plan.u) << ',' << formatReal(plan.alpha) << ',' << formatReal(plan.targetOpinion()) << ','
            << formatReal(plan.objectiveLow) << ',' << formatReal(plan.objectiveHigh) << ','
            << formatReal(sweep.induced[i]) << ',' << formatReal(sweep.normalized[i]) << '\n';
    }
}

void writeTraceCsv(std::ostream& out, const CampaignTrace& trace) {
    out << "step,stance,reward,drift\n";
    for (const auto& step : trace.steps) {
        out << step.step << ',' << formatReal(step.stance) << ',' << formatReal(step.reward) << ','
            << formatReal(step.drift) << '\n';
    }
}

void writeCorrelationCsv(std::ostream& out, const std::vector<CorrelationReport>& reports) {
    out << "measure,rho,n_points\n";
    for (const auto& r : reports) {
        out << toString(r.measure) << ',' << formatReal(r.rho) << ',' << r.nPoints << '\n';
    }
}

void writeCentralityCsv(std::ostream& out, const std::vector<CentralityVector>& measures, const SweepResult& sweep,
                        const std::vector<std::string>& labels) {
    out << "node";
    for (const auto& m : measures) {
        out << ',' << toString(m.measure);
    }
    out << ",normalized_disruption\n";
    for (std::size_t i = 0; i < sweep.normalized.size(); ++i) {
        out << labels.at(i);
        for (const auto& m : measures) {
            out << ',' << formatReal(m.values.at(i));
        }
        out << ',' << formatReal(sweep.normalized[i]) << '\n';
    }
}

void writeEquilibriumCsv(std::ostream& out, const EquilibriumResult& result, const std::vector<std::string>& labels) {
    out << "node,z\n";
    for (Eigen::Index i = 0; i < result.z.size(); ++i) {
        out << labels.at(static_cast<std::size_t>(i)) << ',' << formatReal(result.z(i)) << '\n';
    }
}

json toJson(const SbmConfig& cfg) {
    json beta = json::array();
    for (const auto& p : cfg.opinion_beta) {
        beta.push_back(p.alpha);
        beta.push_back(p.beta);
    }
    return json{{"community_sizes", cfg.community_sizes},
                {"p_intra", cfg.p_intra},
                {"p_inter", cfg.p_inter},
                {"opinion_beta", beta},
                {"susceptibility_beta", {cfg.susceptibility_beta.alpha, cfg.susceptibility_beta.beta}},
                {"epsilon", cfg.epsilon},
                {"seed", cfg.seed}};
}

SbmConfig sbmConfigFromJson(const json& doc) {
    rejectUnknown(doc,
                  {"community_sizes", "p_intra", "p_inter", "opinion_beta", "susceptibility_beta", "epsilon", "seed"},
                  "SBM config");
    SbmConfig cfg;
    cfg.community_sizes = field(doc, "community_sizes", cfg.community_sizes);
    cfg.p_intra = field(doc, "p_intra", cfg.p_intra);
    cfg.p_inter = field(doc, "p_inter", cfg.p_inter);
    if (doc.contains("opinion_beta")) {
        const auto flat = field(doc, "opinion_beta", std::vector<double>{});
        if (flat.size() % 2 != 0) {
            throw InvalidArgument("opinion_beta must list (alpha, beta) pairs: [a1, b1, a2, b2, ...]");
        }
        cfg.opinion_beta.clear();
        for (std::size_t i = 0; i < flat.size(); i += 2) {
            cfg.opinion_beta.push_back({flat[i], flat[i + 1]});
        }
    }
    if (doc.contains("susceptibility_beta")) {
        const auto pair = field(doc, "susceptibility_beta", std::vector<double>{});
        if (pair.size() != 2) {
            throw InvalidArgument("susceptibility_beta must be [alpha, beta]");
        }
        cfg.susceptibility_beta = {pair[0], pair[1]};
    }
    cfg.epsilon = field(doc, "epsilon", cfg.epsilon);
    cfg.seed = field(doc, "seed", cfg.seed);
    cfg.validate();
    return cfg;
}

json toJson(const CampaignConfig& cfg) {
    return json{{"target", cfg.target},       {"sigma", cfg.sigma},
                {"eps_stop", cfg.eps_stop},   {"max_steps", cfg.max_steps},
                {"drift_budget", cfg.drift_budget}, {"seed", cfg.seed}};
}

CampaignConfig campaignConfigFromJson(const json& doc) {
    rejectUnknown(doc, {"target", "sigma", "eps_stop", "max_steps", "drift_budget", "seed"}, "campaign config");
    CampaignConfig cfg;
    cfg.target = field(doc, "target", cfg.target);
    cfg.sigma = field(doc, "sigma", cfg.sigma);
    cfg.eps_stop = field(doc, "eps_stop", cfg.eps_stop);
    cfg.max_steps = field(doc, "max_steps", cfg.max_steps);
    cfg.drift_budget = field(doc, "drift_budget", cfg.drift_budget);
    cfg.seed = field(doc, "seed", cfg.seed);
    cfg.validate();
    return cfg;
}

json toJson(const DisruptionReport& report) {
    return json{{"state_tag", toString(report.tag)},
                {"polarization", report.polarization},
                {"disagreement", report.disagreement},
                {"disruption", report.disruption}};
}

json toJson(const EquilibriumResult& result, bool includeVector) {
    json doc{{"model", toString(result.model)},
             {"residual", result.residual},
             {"iterations", result.iterations},
             {"condition_estimate", result.rcond > 0.0 ? 1.0 / result.rcond : std::numeric_limits<double>::infinity()},
             {"rcond", result.rcond},
             {"out_of_range", result.outOfRange}};
    if (includeVector) {
        doc["z"] = std::vector<double>(result.z.data(), result.z.data() + result.z.size());
    }
    return doc;
}

json toJson(const PerturbationPlan& plan, const std::vector<std::string>& labels) {
    return json{{"node", labels.at(plan.u)},
                {"index", plan.u},
                {"alpha", plan.alpha},
                {"s_prime_u", plan.targetOpinion()},
                {"objective_low", plan.objectiveLow},
                {"objective_high", plan.objectiveHigh},
                {"objective", plan.objective()},
                {"chosen", toString(plan.chosen)}};
}

json toJson(const CampaignTrace& trace, const CampaignConfig& cfg) {
    json doc{{"config", toJson(cfg)}, {"outcome", toString(trace.outcome)}, {"steps", trace.steps.size()}};
    if (!trace.steps.empty()) {
        doc["final_stance"] = trace.finalStance();
        doc["final_reward"] = trace.finalReward();
        doc["final_drift"] = trace.steps.back().drift;
    }
    if (trace.finalContent) {
        doc["content_id"] = trace.finalContent->id;
    }
    return doc;
}

json toJson(const CorrelationReport& report) {
    return json{{"measure", toString(report.measure)}, {"rho", report.rho}, {"n_points", report.nPoints}};
}

} // namespace dissensus::io
