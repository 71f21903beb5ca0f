// Command-line front end: check / verify / wronskian-report /
// synthesize pfaffian / synthesize spectral / series over system files.

#include "wirt/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw wirt::error(wirt::errc::input, "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

wirt::CylindricalityProfile parse_profile_flag(const std::string& text) {
    wirt::CylindricalityProfile p;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) {
        std::string trimmed;
        for (char c : item)
            if (!std::isspace(static_cast<unsigned char>(c)))
                trimmed += c;
        if (trimmed.empty())
            continue;
        p.allowed.insert(*wirt::parse_poly(trimmed).vars().begin());
    }
    if (p.allowed.empty())
        throw wirt::error(wirt::errc::input, "--profile lists no variables");
    return p;
}

std::map<wirt::Var, wirt::GaussianRational> parse_at_flag(const std::string& text) {
    std::map<wirt::Var, wirt::GaussianRational> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw wirt::error(wirt::errc::input, "--at entries look like z1=0");
        std::string var = item.substr(0, eq), val = item.substr(eq + 1);
        wirt::Var v = *wirt::parse_poly(var).vars().begin();
        out[v] = wirt::parse_scalar(val);
    }
    return out;
}

int emit(const wirt::CommandResult& r) {
    std::cout << r.report.str();
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic kernel for R-differentiable polynomial differential systems"};
    app.require_subcommand(1);

    std::string file, hints_file, role = "first", profile_flag, at_flag;
    int deg_bound = -1, zeta = 0, order = 6;
    bool allow_float = false;

    auto* check = app.add_subcommand("check", "structural solvability checks");
    check->add_option("file", file)->required();

    auto* verify = app.add_subcommand("verify", "verify the file's candidate blocks");
    verify->add_option("file", file)->required();
    verify->add_option("--deg-bound", deg_bound, "cofactor degree bound");

    auto* wron = app.add_subcommand("wronskian-report", "necessary-condition report");
    wron->add_option("file", file)->required();
    wron->add_option("--deg-bound", deg_bound);

    auto* synth = app.add_subcommand("synthesize", "search for integrals / multipliers");
    synth->require_subcommand(1);
    auto* pf = synth->add_subcommand("pfaffian", "gradient-ansatz synthesis");
    pf->add_option("file", file)->required();
    pf->add_option("--role", role, "first | multiplier | partial");
    pf->add_option("--profile", profile_flag, "comma-separated variable list");
    pf->add_option("--deg-bound", deg_bound);
    auto* sp = synth->add_subcommand("spectral", "eigenvector-chain synthesis");
    sp->add_option("file", file)->required();
    sp->add_option("--zeta", zeta, "distinguished operator (1-based)");
    sp->add_option("--hints", hints_file, "extra hint file (eigenvalues ...)");
    sp->add_flag("--allow-float-discovery", allow_float,
                 "let a floating pass propose eigenvalues (still confirmed exactly)");

    auto* series = app.add_subcommand("series", "truncated series solution");
    series->add_option("file", file)->required();
    series->add_option("--order", order, "truncation order");
    series->add_option("--at", at_flag, "center, e.g. z1=0,w1=1");

    CLI11_PARSE(app, argc, argv);

    try {
        wirt::SystemFile sf = wirt::parse_system_file(slurp(file));
        if (check->parsed())
            return emit(wirt::run_check(sf));
        if (verify->parsed())
            return emit(wirt::run_verify(
                sf, deg_bound >= 0 ? std::optional<int>(deg_bound) : std::nullopt));
        if (wron->parsed())
            return emit(wirt::run_wronskian_report(
                sf, deg_bound >= 0 ? std::optional<int>(deg_bound) : std::nullopt));
        if (pf->parsed()) {
            std::optional<wirt::CylindricalityProfile> prof;
            if (!profile_flag.empty())
                prof = parse_profile_flag(profile_flag);
            return emit(wirt::run_synthesize_pfaffian(
                sf, role, prof, deg_bound >= 0 ? std::optional<int>(deg_bound) : std::nullopt));
        }
        if (sp->parsed()) {
            std::vector<wirt::GaussianRational> extra;
            if (!hints_file.empty())
                extra = wirt::parse_hints_file(slurp(hints_file)).eigenvalues;
            return emit(wirt::run_synthesize_spectral(
                sf, extra, zeta > 0 ? std::optional<int>(zeta) : std::nullopt, allow_float));
        }
        if (series->parsed()) {
            std::map<wirt::Var, wirt::GaussianRational> at;
            if (!at_flag.empty())
                at = parse_at_flag(at_flag);
            return emit(wirt::run_series(sf, order, at));
        }
    } catch (const wirt::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case wirt::errc::verification: return 1;
            case wirt::errc::input: return 2;
            case wirt::errc::capability: return 3;
            case wirt::errc::internal: return 70;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 70;
    }
    return 2;
}
