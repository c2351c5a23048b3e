#include "pseudopoisson/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pseudopoisson/errors.hpp"
#include "pseudopoisson/inference.hpp"
#include "pseudopoisson/model_select.hpp"

namespace pseudopoisson::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::uint64_t kDefaultSeed = 0;

// Structured output carries 12 significant digits.
Json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

std::string fixed(double x, int digits) {
    if (!std::isfinite(x)) return x < 0 ? "-inf" : "nan";
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << x;
    return os.str();
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

Count parse_count(std::string_view field, std::size_t row, const char* column) {
    field = trim(field);
    if (field.empty()) throw ParseError(row, std::string("missing value for ") + column);
    Count value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError(row, std::string(column) + " is not a nonnegative integer: '" +
                                  std::string(field) + "'");
    }
    return value;
}

std::string_view hypothesis_text(Submodel h) {
    switch (h) {
        case Submodel::EqualRates: return "lambda2 = lambda3";
        case Submodel::ZeroIntercept: return "lambda2 = 0";
        case Submodel::Independence: return "lambda3 = 0";
        case Submodel::Full: break;
    }
    return "";
}

Json params_json(const ModelParams& p) {
    return Json{{"lambda1", num(p.lambda1)}, {"lambda2", num(p.lambda2)}, {"lambda3", num(p.lambda3)}};
}

Json fit_json(const FitResult& f) {
    Json j;
    j["model"] = to_string(f.model);
    j["method"] = to_string(f.method);
    j["estimates"] = params_json(f.estimates);
    if (f.se) {
        j["se"] = Json{{"lambda1", num((*f.se)[0])}, {"lambda2", num((*f.se)[1])}, {"lambda3", num((*f.se)[2])}};
    } else {
        j["se"] = nullptr;
    }
    j["loglik"] = num(f.loglik);
    j["minus2loglik"] = num(-2.0 * f.loglik);
    j["converged"] = f.converged;
    j["boundary"] = f.boundary;
    j["corr_hat"] = num(f.corr_hat);
    j["raw_estimates"] = f.raw ? params_json(*f.raw) : Json(nullptr);
    return j;
}

void fit_warnings(const FitResult& f, const std::string& label, Json& warnings) {
    if (f.raw) {
        std::ostringstream os;
        os << label << ": moment estimate clamped to the parameter space (raw lambda2 = "
           << f.raw->lambda2 << ", raw lambda3 = " << f.raw->lambda3 << ")";
        warnings.push_back(os.str());
    } else if (f.boundary) {
        warnings.push_back(label + ": estimate lies on the boundary of the parameter space");
    }
    if (!std::isfinite(f.loglik)) {
        warnings.push_back(label + ": data have zero likelihood at the estimates");
    }
}

Json base_record(const CliConfig& c) {
    Json inputs;
    if (c.input_path) inputs["input"] = c.input_path->string();
    inputs["header"] = c.header;
    if (c.model) inputs["model"] = to_string(*c.model);
    if (c.method) inputs["method"] = to_string(*c.method);
    if (c.bootstrap_b) inputs["bootstrap"] = *c.bootstrap_b;
    if (c.seed) inputs["seed"] = c.seed->value;
    if (c.params) inputs["params"] = params_json(*c.params);
    if (c.n) inputs["n"] = *c.n;
    return Json{{"command", to_string(c.command)}, {"inputs", inputs}, {"results", Json::object()},
                {"warnings", Json::array()}};
}

void print_fit_table(std::ostream& os, const FitResult& f, std::size_t n) {
    os << "Model: " << to_string(f.model) << " (" << to_string(f.method) << ")    n = " << n << "\n";
    os << std::left << std::setw(12) << "Parameter" << std::setw(16) << "Estimate" << "SE\n";
    const double est[] = {f.estimates.lambda1, f.estimates.lambda2, f.estimates.lambda3};
    for (int k = 0; k < 3; ++k) {
        os << std::setw(12) << ("lambda" + std::to_string(k + 1)) << std::setw(16) << fixed(est[k], 6)
           << (f.se ? fixed((*f.se)[k], 6) : "-") << "\n";
    }
    os << std::setw(12) << "rho" << fixed(f.corr_hat, 6) << "\n";
    os << std::setw(12) << "-2 log L" << fixed(-2.0 * f.loglik, 3) << "\n";
    if (f.boundary) os << "boundary estimate\n";
}

void print_warnings(std::ostream& os, const Json& warnings) {
    for (const auto& w : warnings) os << "warning: " << w.get<std::string>() << "\n";
}

std::string card_label(const ModelCard& c) { return "BPP " + c.name; }

void print_comparison_table(std::ostream& os, const ComparisonReport& r) {
    os << std::left << std::setw(16) << "Models" << std::setw(18) << "No. Parameters" << "AIC\n";
    for (const auto& c : r.cards) {
        os << std::setw(16) << card_label(c) << std::setw(18) << c.nparams
           << (c.aic ? fixed(*c.aic, 3) : "----") << "\n";
    }
    const auto& ind = r.independence;
    os << std::setw(16) << "IND (ref.)" << std::setw(18) << ind.nparams
       << (ind.aic ? fixed(*ind.aic, 3) : "----") << "\n";
    os << "Best: " << "BPP " << r.best << "\n";
}

Json card_json(const ModelCard& c) {
    Json j;
    j["name"] = c.name;
    j["mirrored"] = c.mirrored;
    j["submodel"] = to_string(c.submodel);
    j["nparams"] = c.nparams;
    j["feasible"] = c.feasible;
    j["aic"] = c.aic ? num(*c.aic) : Json(nullptr);
    j["fit"] = c.fit ? fit_json(*c.fit) : Json(nullptr);
    if (!c.reason.empty()) j["reason"] = c.reason;
    return j;
}

int do_simulate(const CliConfig& c, std::ostream& out) {
    const Seed seed = c.seed.value_or(Seed{kDefaultSeed});
    const Sample s = sample_bivariate(*c.params, *c.n, seed);
    write_csv(out, s, c.header);
    return kOk;
}

void do_fit(const CliConfig& c, const Sample& s, Json& record, std::ostream& out) {
    const Submodel model = c.model.value_or(Submodel::Full);
    const Method method = c.method.value_or(Method::MLE);
    FitResult f = fit(s, model, method);
    Json& warnings = record["warnings"];
    Json bootstrap = nullptr;
    if (c.bootstrap_b) {
        const Seed seed = c.seed.value_or(Seed{kDefaultSeed});
        const BootstrapResult b = bootstrap_se(s, model, method, *c.bootstrap_b, seed);
        f.se = b.se;
        bootstrap = Json{{"replicates", b.replicates}, {"failed", b.failed}};
        if (b.failed > 0) {
            warnings.push_back(std::to_string(b.failed) + " of " + std::to_string(b.replicates) +
                               " bootstrap replicates failed to fit and were excluded");
        }
    }
    fit_warnings(f, "fit", warnings);
    record["results"] = Json{{"n", s.size()}, {"fit", fit_json(f)}, {"bootstrap", bootstrap}};
    if (c.output_format == OutputFormat::Table) {
        print_fit_table(out, f, s.size());
        print_warnings(out, warnings);
    }
}

void do_test(const CliConfig& c, const Sample& s, Json& record, std::ostream& out) {
    const TestResult t = lrt(s, *c.model);
    Json& warnings = record["warnings"];
    if (t.boundary_hypothesis) {
        warnings.push_back(
            "H0: lambda3 = 0 lies on the boundary of the parameter space; the chi-square(1) "
            "reference is approximate");
    }
    fit_warnings(t.full_fit, "full fit", warnings);
    fit_warnings(t.restricted_fit, "restricted fit", warnings);
    record["results"] = Json{{"n", s.size()},
                             {"hypothesis", to_string(t.hypothesis)},
                             {"stat", num(t.stat)},
                             {"pvalue", num(t.pvalue)},
                             {"df", t.df},
                             {"reject_at_0.05", t.pvalue < 0.05},
                             {"restricted_fit", fit_json(t.restricted_fit)},
                             {"full_fit", fit_json(t.full_fit)}};
    if (c.output_format == OutputFormat::Table) {
        out << "H0: " << hypothesis_text(t.hypothesis) << " (" << to_string(t.hypothesis)
            << ")    n = " << s.size() << "\n";
        out << std::left << std::setw(16) << "-2 log Lambda" << fixed(t.stat, 4) << "\n";
        out << std::setw(16) << "df" << t.df << "\n";
        out << std::setw(16) << "p-value" << std::setprecision(6) << t.pvalue << "\n";
        out << "Decision at 5%: " << (t.pvalue < 0.05 ? "reject H0" : "do not reject H0") << "\n";
        print_warnings(out, warnings);
    }
}

void do_compare(const CliConfig& c, const Sample& s, Json& record, std::ostream& out) {
    const ComparisonReport r = compare_models(s);
    Json& warnings = record["warnings"];
    Json cards = Json::array();
    for (const auto& card : r.cards) {
        cards.push_back(card_json(card));
        if (!card.feasible) warnings.push_back("BPP " + card.name + " not fitted: " + card.reason);
        else if (card.fit->boundary) fit_warnings(*card.fit, "BPP " + card.name, warnings);
    }
    record["results"] = Json{{"n", s.size()},
                             {"cards", cards},
                             {"independence", card_json(r.independence)},
                             {"best", r.best}};
    if (c.output_format == OutputFormat::Table) {
        print_comparison_table(out, r);
        print_warnings(out, warnings);
    }
}

void do_diagnose(const CliConfig& c, const Sample& s, Json& record, std::ostream& out) {
    const SampleMoments m = sample_moments(s);
    const auto di = empirical_dispersion(s);
    const double denom = std::sqrt(m.v1 * m.v2);
    const double corr = denom > 0.0 ? m.s12 / denom : std::nan("");
    Json& warnings = record["warnings"];
    if (!(denom > 0.0)) warnings.push_back("sample correlation undefined: a margin is constant");
    record["results"] = Json{{"n", s.size()},
                             {"m1", num(m.m1)},
                             {"m2", num(m.m2)},
                             {"s12", num(m.s12)},
                             {"v1", num(m.v1)},
                             {"v2", num(m.v2)},
                             {"dispersion_x1", num(di[0])},
                             {"dispersion_x2", num(di[1])},
                             {"sample_correlation", num(corr)}};
    if (c.output_format == OutputFormat::Table) {
        out << "n = " << s.size() << "\n" << std::left;
        out << std::setw(20) << "Mean X1" << fixed(m.m1, 6) << "\n";
        out << std::setw(20) << "Mean X2" << fixed(m.m2, 6) << "\n";
        out << std::setw(20) << "Fisher index X1" << fixed(di[0], 6) << "\n";
        out << std::setw(20) << "Fisher index X2" << fixed(di[1], 6) << "\n";
        out << std::setw(20) << "Correlation" << (denom > 0.0 ? fixed(corr, 6) : "undefined") << "\n";
        print_warnings(out, warnings);
    }
}

int exit_code_for(const Error& e) {
    if (dynamic_cast<const ConvergenceError*>(&e)) return kNoConvergence;
    if (dynamic_cast<const InfeasibleError*>(&e)) return kInfeasible;
    return kDomainError;
}

}  // namespace

Command parse_command(std::string_view text) {
    if (text == "simulate") return Command::Simulate;
    if (text == "fit") return Command::Fit;
    if (text == "test") return Command::Test;
    if (text == "compare") return Command::Compare;
    if (text == "diagnose") return Command::Diagnose;
    throw DomainError("cli: unknown command '" + std::string(text) + "'");
}

std::string_view to_string(Command command) noexcept {
    switch (command) {
        case Command::Simulate: return "simulate";
        case Command::Fit: return "fit";
        case Command::Test: return "test";
        case Command::Compare: return "compare";
        case Command::Diagnose: return "diagnose";
    }
    return "unknown";
}

void CliConfig::validate() const {
    if (command == Command::Simulate) {
        if (!params) throw DomainError("cli: simulate requires --params");
        if (!n || *n == 0) throw DomainError("cli: simulate requires --n >= 1");
        params->validate();
        return;
    }
    if (!input_path) throw DomainError("cli: " + std::string(to_string(command)) + " requires --input");
    if (command == Command::Test && (!model || *model == Submodel::Full)) {
        throw DomainError(
            "cli: test requires --model equal-rates, zero-intercept or independence");
    }
    if (bootstrap_b && *bootstrap_b < 2) throw DomainError("cli: --bootstrap must be >= 2");
}

ModelParams parse_params(std::string_view text) {
    ModelParams p;
    double* slots[] = {&p.lambda1, &p.lambda2, &p.lambda3};
    std::size_t filled = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string_view field =
            trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (filled == 3) throw DomainError("cli: --params takes exactly three values");
        const std::string buf(field);
        char* end = nullptr;
        const double v = std::strtod(buf.c_str(), &end);
        if (buf.empty() || end != buf.c_str() + buf.size()) {
            throw DomainError("cli: cannot parse parameter '" + buf + "'");
        }
        *slots[filled++] = v;
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (filled != 3) throw DomainError("cli: --params takes exactly three values");
    p.validate();
    return p;
}

Sample parse_csv(std::istream& in, bool header) {
    std::vector<CountPair> pairs;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        std::string_view view(line);
        if (row == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        if (header && row == 1) continue;
        if (trim(view).empty()) continue;
        const auto comma = view.find(',');
        if (comma == std::string_view::npos) throw ParseError(row, "expected two comma-separated fields");
        const std::string_view rest = view.substr(comma + 1);
        if (rest.find(',') != std::string_view::npos) throw ParseError(row, "expected exactly two fields");
        pairs.push_back({parse_count(view.substr(0, comma), row, "x1"), parse_count(rest, row, "x2")});
    }
    if (pairs.empty()) throw ParseError(row, "no data rows");
    return Sample(std::move(pairs));
}

Sample read_csv(const std::filesystem::path& path, bool header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cli: cannot open '" + path.string() + "'");
    return parse_csv(in, header);
}

void write_csv(std::ostream& out, const Sample& s, bool header) {
    if (header) out << "x1,x2\n";
    for (const auto& x : s) out << x.x1 << ',' << x.x2 << '\n';
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
    try {
        config.validate();
        std::ofstream file;
        if (config.output_path) {
            file.open(*config.output_path, std::ios::binary);
            if (!file) throw DomainError("cli: cannot write '" + config.output_path->string() + "'");
        }
        std::ostream& sink = config.output_path ? static_cast<std::ostream&>(file) : out;

        if (config.command == Command::Simulate) return do_simulate(config, sink);

        const Sample s = read_csv(*config.input_path, config.header);
        Json record = base_record(config);
        std::ostringstream table;
        switch (config.command) {
            case Command::Fit: do_fit(config, s, record, table); break;
            case Command::Test: do_test(config, s, record, table); break;
            case Command::Compare: do_compare(config, s, record, table); break;
            case Command::Diagnose: do_diagnose(config, s, record, table); break;
            case Command::Simulate: break;
        }
        if (config.output_format == OutputFormat::Json) {
            sink << record.dump(2) << "\n";
        } else {
            sink << table.str();
        }
        return kOk;
    } catch (const Error& e) {
        err << "error: " << e.kind() << ": " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    }
}

}  // namespace pseudopoisson::cli
