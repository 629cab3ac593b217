// Command line front end. Groups are given inline as --degree plus a
// semicolon-separated cycle list; elements come from portrait or line
// element files. Exit codes: 0 success, 1 failed verify checks, 2 usage or
// parse problems.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "arboru/dynamics.hpp"
#include "arboru/harness.hpp"
#include "arboru/line_element.hpp"
#include "arboru/orbits.hpp"
#include "arboru/perm_group.hpp"
#include "arboru/portrait.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

arboru::PermGroup group_from_flags(int degree, const std::string& gens) {
    std::vector<arboru::Perm> parsed;
    std::size_t pos = 0;
    while (pos <= gens.size()) {
        std::size_t semi = gens.find(';', pos);
        std::string part =
            gens.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos);
        std::size_t a = part.find_first_not_of(" \t");
        if (a != std::string::npos) {
            std::size_t z = part.find_last_not_of(" \t");
            parsed.push_back(arboru::parse_perm(degree, part.substr(a, z - a + 1)));
        }
        if (semi == std::string::npos) break;
        pos = semi + 1;
    }
    if (parsed.empty()) throw arboru::parse_error("--gens lists no generators");
    return arboru::PermGroup::from_generators(degree, parsed);
}

// "WORD:COLOR" with '-' for the base vertex, e.g. "-:1" or "12:3".
arboru::EdgeAddr parse_edge_flag(const std::string& s, int degree) {
    std::size_t colon = s.rfind(':');
    if (colon == std::string::npos)
        throw arboru::parse_error("--edge expects 'WORD:COLOR'");
    arboru::VertexAddr v = arboru::parse_vertex(s.substr(0, colon), degree);
    const std::string ctext = s.substr(colon + 1);
    if (ctext.size() != 1 || ctext[0] < '1' || ctext[0] > '0' + degree)
        throw arboru::parse_error("--edge color must be a single digit in 1.." +
                                  std::to_string(degree));
    return arboru::EdgeAddr(v, ctext[0] - '0');
}

}  // namespace

int main(int argc, char** argv) {
    using namespace arboru;

    CLI::App app{"exact computation in universal groups over colored regular trees"};
    app.require_subcommand(1);

    int degree = 3;
    int depth = 5;
    std::string gens;
    std::vector<std::string> portrait_files;
    std::string edge_spec;
    std::string config_path;
    std::uint64_t seed = 0;
    bool want_tsv = false;

    auto* ag = app.add_subcommand("analyze-group",
                                  "predicate profile of a color permutation group");
    ag->add_option("--degree", degree, "number of colors")->required();
    ag->add_option("--gens", gens, "generators, cycles separated by ';'")->required();

    auto* og = app.add_subcommand("orbit-growth",
                                  "vertex stabilizer orbit counts per sphere, as TSV");
    og->add_option("--degree", degree, "number of colors")->required();
    og->add_option("--gens", gens, "generators, cycles separated by ';'")->required();
    og->add_option("--depth", depth, "largest sphere radius (default 5)");

    auto* cl = app.add_subcommand("classify",
                                  "elliptic/inversion/hyperbolic type of an element");
    cl->add_option("--degree", degree, "number of colors (default 3)");
    cl->add_option("--portrait", portrait_files, "element file")->required();

    auto* co = app.add_subcommand(
        "compose", "product of portraits, leftmost applied last; prints the result");
    co->add_option("--degree", degree, "number of colors (default 3)");
    co->add_option("--portrait", portrait_files, "factor files, repeatable")->required();

    auto* ts = app.add_subcommand("tits-split",
                                  "factor an edge fixator over the two half trees");
    ts->add_option("--degree", degree, "number of colors (default 3)");
    ts->add_option("--portrait", portrait_files, "element file")->required();
    ts->add_option("--edge", edge_spec, "pointwise fixed edge, 'WORD:COLOR'")->required();

    auto* ct = app.add_subcommand(
        "contraction", "does the first element contract under powers of the second");
    ct->add_option("--degree", degree, "number of colors (default 3)");
    ct->add_option("--portrait", portrait_files, "element files: g then a")->required();

    auto* vf = app.add_subcommand("verify", "run the certificate suite");
    vf->add_option("--config", config_path, "suite config file (default: built-in)");
    auto* seed_opt = vf->add_option("--seed", seed, "suite seed (env ARBORU_SEED wins)");
    vf->add_flag("--tsv", want_tsv, "emit the machine readable table instead of text");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (ag->parsed()) {
            auto F = group_from_flags(degree, gens);
            auto yn = [](bool b) { return b ? "yes" : "no"; };
            std::cout << "order=" << F.order() << " transitive=" << yn(is_transitive(F))
                      << " 2transitive=" << yn(is_2transitive(F))
                      << " primitive=" << yn(is_primitive(F))
                      << " gen-by-stabs=" << yn(is_generated_by_point_stabilizers(F))
                      << "\n";
        } else if (og->parsed()) {
            auto F = group_from_flags(degree, gens);
            std::cout << growth_tsv(boundary_orbit_growth(F, depth));
        } else if (cl->parsed()) {
            if (portrait_files.size() != 1) {
                std::cerr << "error: classify takes exactly one --portrait\n";
                return 2;
            }
            auto el = parse_element(slurp(portrait_files[0]), degree);
            auto cls = std::visit([](const auto& g) { return classify(g); }, el);
            std::cout << print_element_class(cls) << "\n";
        } else if (co->parsed()) {
            Portrait acc = parse_portrait(slurp(portrait_files[0]), degree);
            for (std::size_t i = 1; i < portrait_files.size(); ++i)
                acc = compose(acc, parse_portrait(slurp(portrait_files[i]), degree));
            std::cout << print_portrait(acc);
        } else if (ts->parsed()) {
            if (portrait_files.size() != 1) {
                std::cerr << "error: tits-split takes exactly one --portrait\n";
                return 2;
            }
            Portrait g = parse_portrait(slurp(portrait_files[0]), degree);
            auto [g1, g2] = tits_split(g, parse_edge_flag(edge_spec, degree));
            std::cout << print_portrait(g1) << "---\n" << print_portrait(g2);
        } else if (ct->parsed()) {
            if (portrait_files.size() != 2) {
                std::cerr << "error: contraction takes --portrait g --portrait a\n";
                return 2;
            }
            Portrait g = parse_portrait(slurp(portrait_files[0]), degree);
            Portrait a = parse_portrait(slurp(portrait_files[1]), degree);
            auto res = contraction_membership(g, a);
            if (res.member)
                std::cout << "member witness=" << res.witness_n << "\n";
            else
                std::cout << "not-member\n";
        } else if (vf->parsed()) {
            SuiteConfig cfg = config_path.empty() ? default_suite_config()
                                                  : parse_suite_config(slurp(config_path));
            if (seed_opt->count() > 0) cfg.seed = seed;
            if (const char* env = std::getenv("ARBORU_SEED")) cfg.seed = std::stoull(env);
            auto rep = run_suite(cfg);
            std::cout << (want_tsv ? rep.tsv : rep.text);
            return rep.all_pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
