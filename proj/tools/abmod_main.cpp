#include "cli_lib.hpp"

#include "abmod/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path);
    if (!f) throw abmod::ValidationError("cannot open input file \"" + path + "\"");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw abmod::ValidationError("cannot open output file \"" + path + "\"");
    f << text;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact calculator for finite-rank (a,b)-modules and frescos"};
    app.require_subcommand(1);

    std::string in_path, out_path, suite;
    int order = 0, guard = 0;
    uint64_t seed = 1;
    bool decimal = false;

    auto add_common = [&](CLI::App* sub, bool needs_input) {
        if (needs_input) sub->add_option("--in", in_path, "input JSON file (default: stdin)");
        sub->add_option("--out", out_path, "output file (default: stdout)");
        sub->add_option("--order", order, "truncation order override");
        sub->add_option("--guard", guard, "saturation guard digits");
        sub->add_option("--seed", seed, "seed for randomized verification");
        sub->add_flag("--decimal", decimal, "add non-authoritative decimal renderings");
    };

    for (const char* name : {"invariants", "bernstein", "jh", "pushforward", "classify"})
        add_common(app.add_subcommand(name), true);
    CLI::App* verify = app.add_subcommand("verify", "run a named property suite");
    add_common(verify, false);
    verify->add_option("--suite", suite, "suite name (default: all)");
    verify->add_option("--in", in_path, "optional job JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string command = app.get_subcommands().front()->get_name();
    try {
        abmod::cli::JobSpec job;
        bool have_file = !in_path.empty() || command != "verify";
        if (have_file) {
            std::string text = read_input(in_path);
            abmod::Json j;
            try {
                j = abmod::Json::parse(text);
            } catch (const nlohmann::json::exception& e) {
                throw abmod::ParseError(std::string("invalid JSON: ") + e.what());
            }
            if (j.is_object() && j.contains("command")) {
                if (j["command"].get<std::string>() != command)
                    throw abmod::ValidationError("job command does not match the subcommand");
                job = abmod::cli::parse_spec(text);
            } else {
                // Bare payload: wrap it into a job for this subcommand.
                abmod::Json wrapped;
                wrapped["command"] = command;
                if (j.is_object() && j.contains("theta") && j.contains("input")) {
                    wrapped["input"] = j["input"];
                    wrapped["theta"] = j["theta"];
                } else if (j.is_object() && j.contains("theta") &&
                           (j.contains("lambda1") || j.contains("action"))) {
                    abmod::Json input = j;
                    input.erase("theta");
                    wrapped["input"] = input;
                    wrapped["theta"] = j["theta"];
                } else {
                    wrapped["input"] = j;
                }
                job = abmod::cli::parse_spec(wrapped.dump());
            }
        } else {
            job.command = command;
        }
        if (order > 0) job.order = order;
        if (guard > 0) job.guard = guard;
        if (seed != 1) job.seed = seed;
        if (decimal) job.decimal = true;
        if (!suite.empty()) job.suite = suite;

        abmod::Json report = abmod::cli::run_job(job);
        write_output(out_path, report.dump(2) + "\n");
        if (command == "verify") return abmod::cli::verify_exit_status(report);
        return 0;
    } catch (const abmod::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const abmod::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const abmod::Error& e) {
        abmod::Json err;
        err["error"] = e.code();
        err["message"] = e.what();
        write_output(out_path, err.dump(2) + "\n");
        return 1;
    }
}
