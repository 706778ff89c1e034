#include "rbmo/io.hpp"

#include <fstream>
#include <sstream>

namespace rbmo {

namespace {

std::vector<double> as_doubles(const json& arr) {
    std::vector<double> out;
    for (const auto& v : arr) out.push_back(v.get<double>());
    return out;
}

}  // namespace

Space load_space(const json& doc) {
    if (!doc.is_object()) throw ConfigError("space document must be a JSON object");
    if (!doc.contains("weights")) throw ConfigError("space document: missing weights");
    std::vector<double> weights = as_doubles(doc.at("weights"));
    std::vector<std::string> names;
    if (doc.contains("points") && !doc.at("points").is_null())
        for (const auto& v : doc.at("points")) names.push_back(v.get<std::string>());
    const std::string metric = doc.value("metric", "euclidean");
    if (metric == "euclidean") {
        if (!doc.contains("coords") || doc.at("coords").is_null())
            throw ConfigError("space document: euclidean metric needs coords");
        std::vector<std::vector<double>> coords;
        for (const auto& row : doc.at("coords")) coords.push_back(as_doubles(row));
        return Space::from_coords(coords, std::move(weights), std::move(names));
    }
    if (metric == "matrix") {
        if (!doc.contains("dist") || doc.at("dist").is_null())
            throw ConfigError("space document: matrix metric needs dist");
        std::vector<std::vector<double>> dist;
        for (const auto& row : doc.at("dist")) dist.push_back(as_doubles(row));
        return Space::from_matrix(std::move(dist), std::move(weights), std::move(names));
    }
    throw ConfigError("space document: metric must be 'euclidean' or 'matrix'");
}

Space load_space_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open space file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("bad JSON in " + path + ": " + e.what());
    }
    return load_space(doc);
}

json space_to_json(const Space& space) {
    json doc;
    doc["metric"] = "matrix";
    doc["coords"] = nullptr;
    json dist = json::array();
    for (int i = 0; i < space.size(); ++i) {
        json row = json::array();
        for (int j = 0; j < space.size(); ++j) row.push_back(space.dist(i, j));
        dist.push_back(row);
    }
    doc["dist"] = dist;
    doc["weights"] = space.weights();
    doc["points"] = space.names();
    return doc;
}

json lambda_to_json(const DominatingFunction& lambda) {
    json doc;
    switch (lambda.kind()) {
        case LambdaKind::PowerLaw:
            doc["variant"] = "power";
            doc["C"] = lambda.power_C();
            doc["d"] = lambda.power_d();
            break;
        case LambdaKind::BallMeasure:
            doc["variant"] = "ballmeasure";
            break;
        case LambdaKind::Envelope:
            doc["variant"] = "envelope";
            break;
    }
    doc["C_lambda"] = lambda.C_lambda();
    if (lambda.has_scale_floor()) doc["scale_floor"] = true;
    return doc;
}

DominatingFunction lambda_from_json(const Space& space, const json& doc) {
    const std::string variant = doc.value("variant", "");
    if (variant == "power")
        return DominatingFunction::power_law(doc.at("C").get<double>(), doc.at("d").get<double>());
    if (variant == "ballmeasure") return DominatingFunction::ball_measure(space);
    if (variant == "envelope")
        return DominatingFunction::envelope(space, doc.at("C_lambda").get<double>());
    throw ConfigError("lambda document: unknown variant '" + variant + "'");
}

DominatingFunction lambda_from_spec(const Space& space, const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.empty()) throw ConfigError("empty lambda spec");
    try {
        if (parts[0] == "power" && parts.size() == 3)
            return DominatingFunction::power_law(std::stod(parts[1]), std::stod(parts[2]));
        if (parts[0] == "ballmeasure" && parts.size() == 1)
            return DominatingFunction::ball_measure(space);
        if (parts[0] == "envelope" && parts.size() == 2)
            return DominatingFunction::envelope(space, std::stod(parts[1]));
        if (parts[0] == "fit" && parts.size() == 2) return fit_power_law(space, std::stod(parts[1]));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad lambda spec: ") + e.what());
    }
    throw ConfigError("bad lambda spec '" + spec + "' (power:C:d | ballmeasure | envelope:CL | fit:d)");
}

json diagnostics_to_json(const Space& space, const DoublingDiagnostics& diag) {
    json doc;
    doc["N_bound"] = diag.N_bound;
    doc["n_exponent"] = diag.n_exponent;
    json table = json::object();
    for (const auto& [delta, pc] : diag.per_delta_packing) {
        json entry;
        entry["lower"] = pc.lower;
        entry["upper"] = pc.upper;
        entry["exact"] = pc.exact;
        table[std::to_string(delta)] = entry;
    }
    doc["per_delta_packing"] = table;
    doc["C_mu"] = diag.C_mu;
    doc["C_mu_sup"] = diag.C_mu_sup;
    doc["witnesses"] = {
        {"C_mu",
         {{"center", space.name(diag.C_mu_witness.center)}, {"radius", diag.C_mu_witness.radius}}},
        {"C_mu_sup",
         {{"center", space.name(diag.C_mu_sup_witness.center)},
          {"radius", diag.C_mu_sup_witness.radius}}}};
    // N_bound is computed at right-limit radii (condition (4) over all formal
    // balls); per_delta_packing is the canonical-ball scan for condition (3)
    doc["condition"] = {{"N_bound", "quarter-radius packing, right-limit radii"},
                        {"per_delta_packing", "delta-packing, canonical radii"}};
    return doc;
}

json upper_doubling_to_json(const UpperDoublingReport& rep) {
    json doc;
    doc["pass"] = rep.pass;
    doc["monotone"] = rep.monotone_ok;
    doc["doubling"] = rep.doubling_ok;
    doc["domination"] = rep.domination_ok;
    doc["offcenter"] = rep.offcenter_ok;
    doc["witness"] = rep.witness;
    doc["notes"] = rep.notes;
    return doc;
}

json weak_type_to_json(const WeakTypeReport& rep) {
    json doc;
    doc["pass"] = rep.pass;
    doc["norm1"] = rep.norm1;
    doc["worst_ratio"] = rep.worst_ratio;
    doc["witness_t"] = rep.witness_t;
    json table = json::array();
    for (const auto& e : rep.table)
        table.push_back({{"t", e.t}, {"level_mass", e.level_mass}, {"bound", e.bound}});
    doc["table"] = table;
    return doc;
}

json family_to_json(const RBMOProblem& problem, const AdmissibleFamily& family) {
    json doc;
    doc["A"] = family.A;
    doc["rho"] = problem.rho;
    doc["lambda"] = lambda_to_json(problem.lambda);
    json balls = json::array();
    for (int b = 0; b < problem.ball_count(); ++b) {
        const Ball& ball = problem.family.ball(b);
        balls.push_back({{"center", problem.space->name(ball.center)},
                         {"radius", ball.radius},
                         {"f_B", family.f_B[b]}});
    }
    doc["balls"] = balls;
    return doc;
}

AdmissibleFamily family_from_json(const RBMOProblem& problem, const json& doc) {
    AdmissibleFamily fam;
    fam.A = doc.at("A").get<double>();
    const auto& balls = doc.at("balls");
    if (static_cast<int>(balls.size()) != problem.ball_count())
        throw ConfigError("family document does not match the canonical family");
    for (const auto& b : balls) fam.f_B.push_back(b.at("f_B").get<double>());
    return fam;
}

json compare_rho_to_json(const CompareRhoReport& rep) {
    return json{{"A_rho", rep.A_rho},       {"A_sigma", rep.A_sigma},
                {"C", rep.C},               {"monotone_ok", rep.monotone_ok},
                {"ratio_ok", rep.ratio_ok}, {"realised_ratio", rep.realised_ratio},
                {"pass", rep.pass}};
}

json compare_bmo_to_json(const CompareBmoReport& rep) {
    return json{{"A", rep.A},
                {"bmo", rep.bmo},
                {"c1", rep.c1},
                {"c2", rep.c2},
                {"sandwich_ok", rep.sandwich_ok},
                {"C_a", rep.C_a},
                {"C_b", rep.C_b},
                {"pairs_ok", rep.pairs_ok},
                {"worst_pair_ratio", rep.worst_pair_ratio},
                {"pass", rep.pass}};
}

json section5_to_json(const Section5Report& rep) {
    return json{{"ancestors_ok", rep.ancestors_ok},
                {"worst_ancestor_excess", rep.worst_ancestor_excess},
                {"kernel_cap", rep.kernel_cap},
                {"neighbours_ok", rep.neighbours_ok},
                {"neighbour_pairs", rep.neighbour_pairs},
                {"neighbour_skipped", rep.neighbour_skipped},
                {"averages_ok", rep.averages_ok},
                {"worst_average_gap", rep.worst_average_gap},
                {"pass", rep.pass}};
}

json jn_report_to_json(const Space& space, const JNReport& rep) {
    json doc;
    doc["B0"] = {{"center", space.name(rep.b0.center)}, {"radius", rep.b0.radius}};
    doc["rho"] = rep.rho;
    doc["A"] = rep.A;
    doc["L"] = rep.L;
    doc["L_over_A"] = rep.L_over_A;
    doc["search_cap_hit"] = rep.search_cap_hit;
    json levels = json::array();
    for (const auto& l : rep.levels)
        levels.push_back({{"parents", l.parents},
                          {"balls", l.balls},
                          {"mass", l.mass},
                          {"halving_ok", l.halving_ok},
                          {"depth_bound_ok", l.depth_bound_ok}});
    doc["levels"] = levels;
    json tail = json::array();
    for (const auto& e : rep.tail)
        tail.push_back({{"t", e.t}, {"tail", e.tail}, {"envelope", e.envelope}});
    doc["tail"] = tail;
    doc["tail_bounds_ok"] = rep.tail_bounds_ok;
    if (rep.c_fit_infinite)
        doc["c_fit"] = nullptr;
    else
        doc["c_fit"] = rep.c_fit;
    doc["c_fit_infinite"] = rep.c_fit_infinite;
    doc["c_fit_ok"] = rep.c_fit_ok;
    doc["pass"] = rep.pass;
    return doc;
}

std::string canonical_table_csv(const Space& space, const CanonicalFamily& family) {
    std::ostringstream os;
    os << "center,radius,members,measure\n";
    for (const Ball& b : family.balls()) {
        os << space.name(b.center) << "," << b.radius << ",";
        const auto mem = space.members(b);
        for (std::size_t i = 0; i < mem.size(); ++i)
            os << (i ? ";" : "") << space.name(mem[i]);
        os << "," << space.measure(b) << "\n";
    }
    return os.str();
}

std::string maximal_profile_csv(const Space& space, const MaximalProfile& prof) {
    std::ostringstream os;
    os << "point,value\n";
    for (int i = 0; i < space.size(); ++i) os << space.name(i) << "," << prof.values[i] << "\n";
    return os.str();
}

std::string slack_table_csv(const RBMOProblem& problem, const AdmissibleFamily& family) {
    std::ostringstream os;
    os << "kind,ball,ball1,slack\n";
    for (int b = 0; b < problem.ball_count(); ++b)
        os << "oscillation," << b << ",,"
           << family.A * problem.mu_rho[b] - problem.oscillation(b, family.f_B[b]) << "\n";
    for (const InclusionPair& p : problem.pairs)
        os << "regularity," << p.small << "," << p.big << ","
           << family.A * p.K - std::abs(family.f_B[p.small] - family.f_B[p.big]) << "\n";
    return os.str();
}

std::string kernel_table_csv(const RBMOProblem& problem) {
    std::ostringstream os;
    os << "B_center,B_radius,B1_center,B1_radius,K\n";
    for (const InclusionPair& p : problem.pairs) {
        const Ball& b = problem.family.ball(p.small);
        const Ball& b1 = problem.family.ball(p.big);
        os << problem.space->name(b.center) << "," << b.radius << ","
           << problem.space->name(b1.center) << "," << b1.radius << "," << p.K << "\n";
    }
    return os.str();
}

std::string tail_curve_csv(const JNReport& rep) {
    std::ostringstream os;
    os << "t,tail,envelope\n";
    for (const auto& e : rep.tail) os << e.t << "," << e.tail << "," << e.envelope << "\n";
    return os.str();
}

std::string tail_gnuplot_script(const std::string& csv_name, const std::string& out_name) {
    std::ostringstream os;
    os << "set datafile separator ','\n";
    os << "set terminal pngcairo size 800,600\n";
    os << "set output '" << out_name << "'\n";
    os << "set logscale y\n";
    os << "set xlabel 't'\n";
    os << "set ylabel 'mass'\n";
    os << "plot '" << csv_name << "' using 1:2 skip 1 with linespoints title 'tail', \\\n";
    os << "     '" << csv_name << "' using 1:3 skip 1 with lines title 'envelope'\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace rbmo
