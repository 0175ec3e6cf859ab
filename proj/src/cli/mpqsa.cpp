// Command-line driver: constructs catalogue data, applies deformations,
// solves for deformation parameters, prints relation inventories, and
// runs the verification suites.
#include "mpq/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace mpq;

struct GlobalOptions {
    std::string type;
    int rank = 0;
    std::vector<int> grey;
    std::string out = "json";
    unsigned seed = 0;
    int specializations = 3;
    int degree_bound = 6;
};

CartanSuperDatum datum_from(const GlobalOptions& g) {
    if (g.type.empty() || g.rank == 0)
        throw ConfigError("--type and --rank are required for this command");
    auto type = parse_type(g.type);
    if (!type) throw ConfigError("unknown catalogue type '" + g.type + "'");
    try {
        return build_datum(*type, g.rank, {}, std::set<int>(g.grey.begin(), g.grey.end()));
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid datum parameters: ") + e.what());
    }
}

SuiteConfig config_from(const GlobalOptions& g) {
    SuiteConfig cfg;
    cfg.type = g.type;
    cfg.rank = g.rank;
    cfg.grey = std::set<int>(g.grey.begin(), g.grey.end());
    cfg.seed = g.seed;
    cfg.specializations = g.specializations;
    cfg.degree_bound = g.degree_bound;
    return cfg;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open input file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_json_text(text);
}

void emit(const GlobalOptions& g, const Json& j) {
    if (g.out == "json") std::cout << j.dump(2) << "\n";
    else std::cout << j.dump(2) << "\n"; // structured values print the same in text mode
}

Realization default_realization(const CartanSuperDatum& datum, const MultiparamMatrix& P,
                                const std::string& flavor) {
    int n = datum.rank;
    int s = to_frac(standard_matrix(datum).entries).rank();
    if (flavor == "straight-split")
        return build_realization(P, datum, RealizationFlavor::straight_split, 3 * n - s);
    if (flavor == "straight-small")
        return build_realization(P, datum, RealizationFlavor::straight_small, 2 * n - s);
    if (flavor == "split-minimal")
        return build_realization(P, datum, RealizationFlavor::split_minimal, 2 * n);
    throw ConfigError("unknown realization flavor '" + flavor + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiparameter quantum supergroup toolkit"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--type", g.type, "catalogue type (A, B1, B2, C, D1, D2, F4, G3)");
    app.add_option("--rank", g.rank, "diagram rank");
    app.add_option("--grey", g.grey, "odd nodes, where the type leaves the colour free");
    app.add_option("--out", g.out, "output format: json|text")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_option("--seed", g.seed, "random seed for specialized membership checks");
    app.add_option("--specializations", g.specializations,
                   "number of random specializations per membership check");
    app.add_option("--degree-bound", g.degree_bound, "straightening degree bound");

    auto* cmd_datum = app.add_subcommand("datum", "print the Cartan super-datum");

    auto* cmd_matrix = app.add_subcommand("matrix", "print a multiparameter matrix");
    std::string matrix_kind = "generic";
    cmd_matrix->add_option("--kind", matrix_kind, "generic|standard")
        ->check(CLI::IsMember({"generic", "standard"}));

    auto* cmd_realize = app.add_subcommand("realize", "print a realization");
    std::string flavor = "straight-split";
    cmd_realize->add_option("--flavor", flavor,
                            "straight-split|straight-small|split-minimal");

    auto* cmd_deform = app.add_subcommand("deform", "apply a twist or 2-cocycle");
    std::string deform_mode = "twist", deform_input;
    cmd_deform->add_option("--mode", deform_mode, "twist|cocycle")
        ->check(CLI::IsMember({"twist", "cocycle"}));
    cmd_deform->add_option("--input", deform_input,
                           "JSON file with {\"phi\": ...} or {\"chi\": ...}; "
                           "defaults to a fully symbolic twist");

    auto* cmd_solve = app.add_subcommand("solve", "solve for the deformation datum");
    std::string solve_mode = "twist", solve_target;
    cmd_solve->add_option("--mode", solve_mode, "twist|cocycle")
        ->check(CLI::IsMember({"twist", "cocycle"}));
    cmd_solve->add_option("--target", solve_target, "JSON file with the target matrix")
        ->required();

    auto* cmd_relations = app.add_subcommand("relations", "print the relation inventory");

    auto* cmd_verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite = "all";
    bool timings = false;
    cmd_verify->add_option("--suite", suite,
                           "matrix|realization|hopf|twist|cocycle|lie|commute|poly|all");
    cmd_verify->add_flag("--timings", timings, "include wall times (not byte-stable)");

    auto* cmd_semi = app.add_subcommand("semiclassical", "print the Lie cobracket tables");

    auto* cmd_poly = app.add_subcommand("poly", "polynomial-form operations");
    cmd_poly->require_subcommand(1);
    auto* poly_build = cmd_poly->add_subcommand("build", "build and check the handle");
    auto* poly_integrality =
        cmd_poly->add_subcommand("check-integrality", "lattice conditions for a twist");
    std::string poly_twist_input;
    poly_integrality->add_option("--input", poly_twist_input, "JSON file with {\"phi\": ...}")
        ->required();
    auto* poly_compose = cmd_poly->add_subcommand("compose", "compose multiparameters");
    std::string poly_target_input;
    poly_compose->add_option("--target", poly_target_input,
                             "JSON file with the target multiparameter")
        ->required();

    // Global flags may appear after the subcommand name.
    for (CLI::App* sub : {cmd_datum, cmd_matrix, cmd_realize, cmd_deform, cmd_solve,
                          cmd_relations, cmd_verify, cmd_semi, cmd_poly, poly_build,
                          poly_integrality, poly_compose})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_datum->parsed()) {
            emit(g, to_json(datum_from(g)));
        } else if (cmd_matrix->parsed()) {
            auto datum = datum_from(g);
            emit(g, to_json(matrix_kind == "standard" ? standard_matrix(datum)
                                                      : generic_matrix(datum)));
        } else if (cmd_realize->parsed()) {
            auto datum = datum_from(g);
            emit(g, to_json(default_realization(datum, generic_matrix(datum), flavor)));
        } else if (cmd_deform->parsed()) {
            auto datum = datum_from(g);
            MultiparamMatrix P = generic_matrix(datum);
            Realization R = default_realization(datum, P, "straight-split");
            Json result;
            if (deform_mode == "twist") {
                TwistData twist = deform_input.empty()
                                      ? TwistData::symbolic(R.t, "phi")
                                      : parse_twist(read_json_file(deform_input));
                auto [P2, R2] = twist_deform(P, R, twist);
                result["P"] = to_json(P2);
                result["realization"] = to_json(R2);
            } else {
                if (deform_input.empty())
                    throw ConfigError("cocycle deformation needs --input with {\"chi\": ...}");
                CocycleData chi = parse_cocycle(read_json_file(deform_input));
                auto [P2, R2] = cocycle_deform(P, R, chi);
                result["P"] = to_json(P2);
                result["realization"] = to_json(R2);
            }
            emit(g, result);
        } else if (cmd_solve->parsed()) {
            auto datum = datum_from(g);
            MultiparamMatrix P = generic_matrix(datum);
            Realization R = default_realization(datum, P, "straight-split");
            MultiparamMatrix target = parse_matrix(read_json_file(solve_target));
            if (solve_mode == "twist")
                emit(g, to_json(solve_twist(P, target, R)));
            else
                emit(g, to_json(solve_cocycle(P, target, R)));
        } else if (cmd_relations->parsed()) {
            auto datum = datum_from(g);
            MultiparamMatrix P = generic_matrix(datum);
            Realization R = default_realization(datum, P, "straight-split");
            RelationSet rels = relation_set(datum, P, R);
            Json j;
            Json names = Json::array();
            for (const auto& [name, e] : rels.items) names.push_back(name);
            j["count"] = rels.items.size();
            j["families"] = rels.family_counts();
            j["names"] = names;
            emit(g, j);
        } else if (cmd_verify->parsed()) {
            SuiteReport rep = run_suite(suite, config_from(g));
            if (g.out == "text") std::cout << report_text(rep, timings);
            else std::cout << to_json(rep, timings).dump(2) << "\n";
            return rep.exit_code();
        } else if (cmd_semi->parsed()) {
            auto datum = datum_from(g);
            MultiparamMatrix P = generic_matrix(datum);
            Realization R = default_realization(datum, P, "straight-split");
            MpLSbAData lim = semiclassical_limit(datum, P, R);
            Json j;
            j["P"] = to_json(lim.P);
            j["toral_action"] = to_json(lim.act);
            j["cobracket_plus"] = to_json(lim.co_plus);
            j["cobracket_minus"] = to_json(lim.co_minus);
            emit(g, j);
        } else if (cmd_poly->parsed()) {
            auto datum = datum_from(g);
            if (poly_build->parsed()) {
                PolyMultiparam q = PolyMultiparam::generic(datum);
                PolyAlgebraHandle h = build_poly(datum, q);
                VerifyReport rep = verify_poly(h);
                Json j;
                j["multiparameter"] = to_json(q);
                j["checks_passed"] = rep.all_ok();
                if (!rep.all_ok()) j["failures"] = rep.failure_summary();
                emit(g, j);
                return rep.all_ok() ? 0 : 1;
            }
            if (poly_integrality->parsed()) {
                PolyMultiparam q = PolyMultiparam::standard(datum);
                Realization R = build_realization(q.exponents, datum,
                                                  RealizationFlavor::split_minimal,
                                                  2 * datum.rank);
                TwistData twist = parse_twist(read_json_file(poly_twist_input));
                IntegralityResult res = integrality_check(twist, R);
                Json j;
                j["ok"] = res.ok;
                if (res.witness) {
                    j["witness"] = Json{{"block", res.witness->block},
                                        {"row", res.witness->row},
                                        {"col", res.witness->col},
                                        {"value", to_string(res.witness->value)}};
                }
                emit(g, j);
                return res.ok ? 0 : 1;
            }
            // compose
            PolyMultiparam base = PolyMultiparam::standard(datum);
            PolyMultiparam target = parse_poly_multiparam(read_json_file(poly_target_input));
            PolyMatrix qhat = solve_compose(base, target);
            Json j;
            j["qhat"] = to_json(qhat);
            j["composed"] = to_json(compose_multiparam(base, qhat));
            emit(g, j);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
