// Command-line front end: tree generation, term enumeration, sampling,
// reconstruction, verification, and the invariant contrast demos.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <soq/soq.hpp>

namespace {

soq::Backend parse_backend(const std::string& name) {
    if (name == "brute")
        return soq::Backend::brute;
    if (name == "structured")
        return soq::Backend::structured;
    if (name == "both")
        return soq::Backend::both;
    throw CLI::ValidationError("--backend must be brute, structured or both");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw soq::domain_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out)
        throw soq::domain_error("cannot write '" + path + "'");
    out << content;
}

nlohmann::json monomial_json(const soq::LaurentMonomial& m) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [i, e] : m.exponents())
        j[std::to_string(i)] = e;
    return j;
}

nlohmann::json result_json(const soq::ReconstructionResult& result) {
    nlohmann::json j;
    j["tree"] = soq::to_string(result.tree);
    j["query_count"] = result.ledger.size();
    j["coheight_profile"] = monomial_json(soq::coheight_profile(result.tree));
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& level : result.levels) {
        nlohmann::json entry;
        entry["level"] = level.level();
        nlohmann::json profiles = nlohmann::json::array();
        if (level.level() == 1) {
            profiles.push_back(soq::to_string(level.base()));
        } else {
            for (const auto& e : level.elements())
                profiles.push_back(soq::to_string(e));
        }
        entry["profiles"] = std::move(profiles);
        levels.push_back(std::move(entry));
    }
    j["levels"] = std::move(levels);
    return j;
}

int run_verify(const std::vector<soq::RootedTree>& trees, soq::Backend backend) {
    int failures = 0;
    for (const auto& t : trees) {
        soq::TreeOracle oracle(t, backend);
        std::string verdict;
        size_t queries = 0;
        try {
            auto result = soq::reconstruct_tree(oracle);
            queries = result.ledger.size();
            verdict = soq::is_isomorphic(result.tree, t) ? "OK" : "FAIL";
        } catch (const soq::error& e) {
            verdict = std::string("FAIL (") + e.what() + ")";
        }
        if (verdict != "OK")
            ++failures;
        std::cout << verdict << " " << soq::to_string(t) << " queries=" << queries << "\n";
    }
    std::cout << (failures == 0 ? "all round trips OK" : "round trips FAILED") << "\n";
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"strict order quasisymmetric functions of rooted trees: "
                 "sampling oracle and tree reconstruction"};
    app.require_subcommand(1);

    std::string tree_text, tree_text2, query_text, transcript_path, json_path;
    std::string backend_name = "structured";
    int vertices = 0, enumerate_d = 0, max_color = 0, top = 0;
    std::uint64_t seed = 0;

    auto* gen = app.add_subcommand("gen", "generate trees in the parenthesis format");
    gen->add_option("d", vertices, "vertex count of one random tree");
    gen->add_option("--seed", seed, "random seed")->default_val(0);
    gen->add_option("--enumerate", enumerate_d,
                    "emit every isomorphism class with this many vertices instead");

    auto* terms = app.add_subcommand("terms", "list terms of the bounded series, lex-descending");
    terms->add_option("tree", tree_text, "tree in parenthesis format")->required();
    terms->add_option("--max-color", max_color, "color bound (default: vertices + layers)");
    terms->add_option("--top", top, "print only the greatest k terms");

    auto* sample = app.add_subcommand("sample", "evaluate the sampling function at one query");
    sample->add_option("tree", tree_text, "tree in parenthesis format")->required();
    sample->add_option("query", query_text,
                       "query monomial, e.g. \"x1 x2^3\"; \"1\" is unconstrained; a trailing "
                       "^0 factor pins a zero exponent")
        ->required();
    sample->add_option("--backend", backend_name, "brute | structured | both");

    auto* reconstruct = app.add_subcommand("reconstruct", "rebuild a tree from samples");
    reconstruct->add_option("tree", tree_text, "tree backing a live oracle");
    reconstruct->add_option("--transcript", transcript_path,
                            "with a tree: record the transcript here; without: replay this file");
    reconstruct->add_option("--json", json_path, "write the structured result document here");
    reconstruct->add_option("--backend", backend_name, "brute | structured | both");

    auto* verify = app.add_subcommand("verify", "round-trip reconstruction check");
    verify->add_option("tree", tree_text, "tree in parenthesis format");
    verify->add_option("--enumerate", enumerate_d, "check every class with this many vertices");
    verify->add_option("--backend", backend_name, "brute | structured | both");

    auto* separate = app.add_subcommand("separate", "first transcript entry telling two trees apart");
    separate->add_option("tree1", tree_text, "first tree")->required();
    separate->add_option("tree2", tree_text2, "second tree")->required();
    separate->add_option("--backend", backend_name, "brute | structured | both");

    app.add_subcommand("demo-csf",
                       "two non-isomorphic graphs sharing a chromatic symmetric function");

    CLI11_PARSE(app, argc, argv);

    try {
        soq::Backend backend = parse_backend(backend_name);

        if (gen->parsed()) {
            if (enumerate_d > 0) {
                for (const auto& t : soq::enumerate_rooted_trees(enumerate_d))
                    std::cout << soq::to_string(t) << "\n";
            } else if (vertices > 0) {
                std::cout << soq::to_string(soq::random_tree(vertices, seed)) << "\n";
            } else {
                std::cerr << "gen: give a vertex count or --enumerate\n";
                return 1;
            }
        } else if (terms->parsed()) {
            auto t = soq::parse_tree(tree_text);
            int bound = max_color > 0 ? max_color : soq::brute_color_bound(t);
            auto table = soq::build_term_table(t, bound);
            int printed = 0;
            for (auto it = table.terms.rbegin(); it != table.terms.rend(); ++it) {
                if (top > 0 && printed >= top)
                    break;
                std::cout << it->second << " " << soq::to_string(it->first) << "\n";
                ++printed;
            }
        } else if (sample->parsed()) {
            auto t = soq::parse_tree(tree_text);
            auto ans = soq::sample_F(t, soq::parse_query(query_text), backend);
            std::cout << (ans ? soq::to_string(*ans) : "EMPTY") << "\n";
        } else if (reconstruct->parsed()) {
            std::optional<soq::ReconstructionResult> result;
            if (!tree_text.empty()) {
                soq::TreeOracle oracle(soq::parse_tree(tree_text), backend);
                result = soq::reconstruct_tree(oracle);
                if (!transcript_path.empty())
                    write_file(transcript_path, result->ledger.transcript());
            } else if (!transcript_path.empty()) {
                soq::ReplayOracle oracle(soq::parse_transcript(read_file(transcript_path)));
                result = soq::reconstruct_tree(oracle);
            } else {
                std::cerr << "reconstruct: give a tree or --transcript\n";
                return 1;
            }
            std::cout << soq::to_string(result->tree) << "\n";
            std::cout << result->ledger.transcript();
            if (!json_path.empty())
                write_file(json_path, result_json(*result).dump(2) + "\n");
        } else if (verify->parsed()) {
            std::vector<soq::RootedTree> trees;
            if (enumerate_d > 0)
                trees = soq::enumerate_rooted_trees(enumerate_d);
            else if (!tree_text.empty())
                trees.push_back(soq::parse_tree(tree_text));
            else {
                std::cerr << "verify: give a tree or --enumerate\n";
                return 1;
            }
            return run_verify(trees, backend);
        } else if (separate->parsed()) {
            auto witness = soq::strict_order_separates(soq::parse_tree(tree_text),
                                                       soq::parse_tree(tree_text2), backend);
            if (!witness) {
                std::cout << "NONE (isomorphic trees)\n";
            } else {
                std::cout << "entry " << witness->index << ":\n";
                std::cout << "  left:  " << (witness->left.empty() ? "(run ended)" : witness->left)
                          << "\n";
                std::cout << "  right: " << (witness->right.empty() ? "(run ended)" : witness->right)
                          << "\n";
            }
        } else {
            auto bowtie = soq::bowtie_graph();
            auto dart = soq::dart_graph();
            bool equal = soq::csf_fingerprint(bowtie) == soq::csf_fingerprint(dart);
            std::cout << (equal ? "EQUAL" : "UNEQUAL")
                      << " fingerprints, NON-isomorphic graphs\n";
            std::cout << "bowtie:";
            for (auto [u, v] : bowtie.edges)
                std::cout << " " << u << "-" << v;
            std::cout << "\ndart:  ";
            for (auto [u, v] : dart.edges)
                std::cout << " " << u << "-" << v;
            std::cout << "\n";
            return equal ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
