#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"

using namespace hrf;
using namespace hrf::cli;

namespace {

int report(const std::string& kind, const std::exception& e, int code) {
    std::cerr << "hrf: " << kind << ": " << e.what() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolic distortion function R_F of rational maps: evaluation, minimization, asymptotics"};
    std::string command, map, field, at, ball, config_path, measure, out, csv;
    int order = 0, n_max = 0;
    double tol = 0;
    std::uint64_t seed = 0;
    app.add_option("command", command, "eval | minimize | asymptotics | barycenter | capacity | degree1");
    app.add_option("--map", map, "map spec: JSON file, inline JSON or expression such as \"z^2 - 0.3\"");
    app.add_option("--field", field, "R or C")->check(CLI::IsMember({"R", "C"}));
    auto* at_opt = app.add_option("--at", at, "half-space point z_re,z_im,t");
    app.add_option("--ball", ball, "ball point x,y,z")->excludes(at_opt);
    auto* order_opt = app.add_option("--order", order, "Gauss-Legendre nodes per panel");
    auto* nmax_opt = app.add_option("--n-max", n_max, "largest iterate for asymptotics");
    auto* seed_opt = app.add_option("--seed", seed, "random seed");
    auto* tol_opt = app.add_option("--tol", tol, "solver tolerance");
    app.add_option("--measure", measure, "CSV x,y,z,weight of a measure on S^2 (barycenter)");
    app.add_option("--out", out, "also write the JSON result here");
    app.add_option("--csv", csv, "asymptotics data as CSV");
    app.add_option("--config", config_path, "JSON run config, or a previous output to replay");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kParse;
    }

    try {
        RunConfig c;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ParseError("cannot read config '" + config_path + "'");
            const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            c = RunConfig::from_json(parse_json_text(text, config_path));
        }
        if (!command.empty()) c.command = command;
        if (!map.empty()) c.map = map;
        if (!field.empty()) c.field = parse_field(field);
        if (!at.empty()) {
            c.at = parse_triple(at, "--at");
            c.ball.reset();
        }
        if (!ball.empty()) {
            c.ball = parse_triple(ball, "--ball");
            c.at.reset();
        }
        if (*order_opt) c.order = order;
        if (*nmax_opt) c.n_max = n_max;
        if (*seed_opt) c.seed = seed;
        if (*tol_opt) c.tol = tol;
        if (!measure.empty()) c.measure = measure;
        if (!out.empty()) c.out = out;
        if (!csv.empty()) c.csv = csv;
        if (c.command.empty()) throw ParseError("no command given");

        const auto result = run(c);
        const std::string text = result.document.dump(2);
        std::cout << text << '\n';
        if (!c.out.empty()) {
            std::ofstream o(c.out);
            if (!o) throw Error("cannot write '" + c.out + "'");
            o << text << '\n';
        }
        return result.exit_code;
    } catch (const ParseError& e) {
        return report("parse error", e, kParse);
    } catch (const DegenerateLiftError& e) {
        return report("degenerate lift", e, kDegenerate);
    } catch (const ConvergenceError& e) {
        return report("no convergence", e, kNonConvergence);
    } catch (const BudgetError& e) {
        return report("budget exceeded", e, kNonConvergence);
    } catch (const DomainError& e) {
        return report("invalid input", e, kParse);
    } catch (const FieldMismatchError& e) {
        return report("invalid input", e, kParse);
    } catch (const std::exception& e) {
        return report("error", e, kFailure);
    }
}
