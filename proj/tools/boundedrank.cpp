// boundedrank: classify, compare and enumerate spaces of bounded-rank matrices.
//
// Exit codes: 0 pass / labelled, 2 counterexample or violations, 1 usage or input errors.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

#include "boundedrank/errors.hpp"
#include "boundedrank/io.hpp"

using namespace boundedrank;
using nlohmann::ordered_json;

namespace {

ordered_json envelope(const char* command) {
    ordered_json out;
    out["schema"] = kReportSchema;
    out["command"] = command;
    return out;
}

void emit(ordered_json out, const ordered_json& body) {
    for (auto& [k, v] : body.items()) out[k] = v;
    std::cout << out.dump(2) << '\n';
}

std::uint64_t budget_or(std::optional<std::uint64_t> flag, std::uint64_t fallback) {
    if (flag) return *flag;
    if (const char* env = std::getenv("BOUNDEDRANK_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end) throw CLI::ValidationError("BOUNDEDRANK_BUDGET", "not a number: " + std::string(env));
        return v;
    }
    return fallback;
}

MatSpace load(const std::string& file) {
    try {
        return read_mspace_file(file);
    } catch (const ParseError& e) {
        throw std::runtime_error(file + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded-rank matrix spaces over small prime fields"};
    app.require_subcommand(1);
    app.fallthrough();

    unsigned workers = 1;
    std::optional<std::uint64_t> budget;
    std::optional<std::uint64_t> seed;
    app.add_option("--workers", workers, "worker threads")->check(CLI::Range(1u, 256u));
    app.add_option("--budget", budget, "enumeration budget (also BOUNDEDRANK_BUDGET)");
    app.add_option("--seed", seed, "seed for sampled campaigns");

    std::string path, path_b;
    std::size_t r = 0;

    auto* classify_cmd = app.add_subcommand("classify", "label a space read from a file");
    classify_cmd->add_option("file", path)->required();
    classify_cmd->add_option("-r,--rank", r, "rank bound")->required();

    std::string theorem_name, mode_name = "Exhaustive";
    std::size_t n = 0, p = 0;
    int order = 2;
    std::optional<std::size_t> dim;
    std::uint64_t samples = 0;
    auto* verify_cmd = app.add_subcommand("verify", "run a verification campaign");
    verify_cmd->add_option("theorem", theorem_name)->required();
    verify_cmd->add_option("-n", n)->required();
    verify_cmd->add_option("-p", p)->required();
    verify_cmd->add_option("-r", r, "rank bound (unused by GenInverse)");
    verify_cmd->add_option("-q,--order", order);
    verify_cmd->add_option("-d,--dim", dim, "target dimension (defaults to the theorem's)");
    verify_cmd->add_option("--mode", mode_name);
    verify_cmd->add_option("--samples", samples);

    bool allow_transpose = false;
    auto* equiv_cmd = app.add_subcommand("equiv", "search for an equivalence between two spaces");
    equiv_cmd->add_option("a", path)->required();
    equiv_cmd->add_option("b", path_b)->required();
    equiv_cmd->add_flag("--transpose", allow_transpose, "also allow X -> X^T");

    auto* rank_cmd = app.add_subcommand("rank", "maximum rank of a member");
    rank_cmd->add_option("file", path)->required();

    std::size_t d = 0;
    auto* census_cmd = app.add_subcommand("census", "equivalence classes of rank <= r spaces");
    census_cmd->add_option("n", n)->required();
    census_cmd->add_option("p", p)->required();
    census_cmd->add_option("order", order)->required();
    census_cmd->add_option("d", d)->required();
    census_cmd->add_option("r", r)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (classify_cmd->parsed()) {
            MatSpace v = load(path);
            auto res = classify(v, r, budget_or(budget, kDefaultGroupBudget));
            emit(envelope("classify"), classification_json(v, r, res));
            return res.has(Label::Counterexample) ? 2 : 0;
        }
        if (verify_cmd->parsed()) {
            auto t = theorem_from_string(theorem_name);
            if (!t) throw PreconditionError("unknown theorem '" + theorem_name + "'");
            auto m = mode_from_string(mode_name);
            if (!m) throw PreconditionError("unknown mode '" + mode_name + "'");
            Field check(order);  // reject non-prime orders before anything else
            CampaignSpec spec = default_campaign(*t, n, p, r, order);
            if (dim) spec.target_dim = *dim;
            spec.mode = *m;
            spec.samples = samples;
            spec.seed = seed;
            spec.workers = workers;
            spec.budget = budget_or(budget, kDefaultCampaignBudget);
            CampaignReport rep = run_campaign(spec);
            emit(envelope("verify"), campaign_json(rep));
            return rep.pass() ? 0 : 2;
        }
        if (equiv_cmd->parsed()) {
            MatSpace a = load(path), b = load(path_b);
            auto w = are_equivalent(a, b, budget_or(budget, kDefaultGroupBudget),
                                    allow_transpose ? TransposePolicy::Allow : TransposePolicy::Forbid);
            ordered_json body;
            body["equivalent"] = w.has_value();
            body["witness"] = w ? witness_json(*w) : ordered_json(nullptr);
            emit(envelope("equiv"), body);
            if (!w) std::cerr << "not equivalent\n";
            return w ? 0 : 2;
        }
        if (rank_cmd->parsed()) {
            MatSpace v = load(path);
            ordered_json body;
            body["field"] = v.field().order();
            body["shape"] = {v.rows(), v.cols()};
            body["dim"] = v.dim();
            body["rank"] = space_rank(v, budget_or(budget, kDefaultMemberBudget));
            emit(envelope("rank"), body);
            return 0;
        }
        if (census_cmd->parsed()) {
            auto classes = orbit_census(n, p, Field(order), d, r, budget_or(budget, kDefaultCampaignBudget), workers);
            std::uint64_t total = 0;
            for (const auto& c : classes) total += c.size;
            ordered_json body;
            body["n"] = n;
            body["p"] = p;
            body["field"] = order;
            body["d"] = d;
            body["r"] = r;
            body["survivors"] = total;
            body["classes"] = census_json(classes);
            emit(envelope("census"), body);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
