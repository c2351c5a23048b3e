// Command-line front end for the bivariate Pseudo-Poisson toolkit.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pseudopoisson/cli.hpp"
#include "pseudopoisson/errors.hpp"

namespace pp = pseudopoisson;

int main(int argc, char** argv) {
    CLI::App app{"Bivariate Pseudo-Poisson distribution toolkit"};
    app.require_subcommand(1);

    std::string input, output, format = "json", model, method, params;
    std::uint64_t seed = 0;
    std::size_t bootstrap = 0, n = 0;
    bool header = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--output", output, "Write the report to this file instead of stdout");
        sub->add_option("--seed", seed, "64-bit seed");
        sub->add_flag("--header", header, "CSV has (or gets) an x1,x2 header line");
    };
    auto add_input = [&](CLI::App* sub) {
        sub->add_option("--input", input, "CSV file with two count columns")->required();
        sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "table"}));
    };
    auto add_model = [&](CLI::App* sub) {
        sub->add_option("--model", model, "Model or hypothesis")
            ->check(CLI::IsMember({"full", "equal-rates", "zero-intercept", "independence"}));
    };

    auto* simulate = app.add_subcommand("simulate", "Draw a sample and write it as CSV");
    add_common(simulate);
    simulate->add_option("--params", params, "lambda1,lambda2,lambda3")->required();
    simulate->add_option("--n", n, "Sample size")->required();

    auto* fit = app.add_subcommand("fit", "Fit a model by moments or maximum likelihood");
    add_common(fit);
    add_input(fit);
    add_model(fit);
    fit->add_option("--method", method, "Estimator")->check(CLI::IsMember({"mom", "mle"}));
    fit->add_option("--bootstrap", bootstrap, "Bootstrap replicates for standard errors");

    auto* test = app.add_subcommand("test", "Likelihood-ratio test of a submodel");
    add_common(test);
    add_input(test);
    add_model(test);

    auto* compare = app.add_subcommand("compare", "AIC comparison of original and mirrored models");
    add_common(compare);
    add_input(compare);

    auto* diagnose = app.add_subcommand("diagnose", "Empirical dispersion indices and correlation");
    add_common(diagnose);
    add_input(diagnose);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : pp::cli::kDomainError;
    }

    pp::cli::CliConfig config;
    try {
        CLI::App* active = app.get_subcommands().front();
        auto given = [active](const char* name) {
            const CLI::Option* opt = active->get_option_no_throw(name);
            return opt != nullptr && opt->count() > 0;
        };
        config.command = pp::cli::parse_command(active->get_name());
        if (!input.empty()) config.input_path = input;
        if (!output.empty()) config.output_path = output;
        config.output_format =
            format == "table" ? pp::cli::OutputFormat::Table : pp::cli::OutputFormat::Json;
        if (given("--seed")) config.seed = pp::Seed{seed};
        if (!model.empty()) config.model = pp::parse_submodel(model);
        if (!method.empty()) config.method = pp::parse_method(method);
        if (given("--bootstrap")) config.bootstrap_b = bootstrap;
        if (!params.empty()) config.params = pp::cli::parse_params(params);
        if (given("--n")) config.n = n;
        config.header = header;
    } catch (const pp::Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
        return pp::cli::kDomainError;
    }
    return pp::cli::run(config, std::cout, std::cerr);
}
