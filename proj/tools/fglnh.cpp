#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "fglnh/fgl.hpp"
#include "fglnh/nilhecke.hpp"
#include "fglnh/parse.hpp"
#include "fglnh/render.hpp"

namespace {

using namespace fglnh;
using json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitRelationFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInternal = 3;

struct Config {
    std::string fgl_name;
    std::string spec_path;
    int n = 3;
    int trunc = 12;
    std::string format = "text";
    std::optional<bool> graded_override;
    std::vector<std::string> param_overrides;
    std::string output;
    unsigned seed = 0;
};

int default_trunc() {
    if (const char* env = std::getenv("FGLNH_TRUNC")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 12;
}

void emit(const Config& cfg, const std::string& text) {
    if (cfg.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(cfg.output);
    if (!out) throw ParseError("cannot open output file " + cfg.output);
    out << text;
}

// --param name=degree:kind, kind ∈ {free, nil<k>}.
void apply_param_overrides(FglSpec& spec, const std::vector<std::string>& overrides) {
    for (const std::string& text : overrides) {
        auto eq = text.find('=');
        auto colon = text.find(':', eq == std::string::npos ? 0 : eq);
        if (eq == std::string::npos || colon == std::string::npos || colon < eq)
            throw ParseError("bad --param '" + text + "' (expected name=degree:kind)");
        std::string name = text.substr(0, eq);
        int degree = std::stoi(text.substr(eq + 1, colon - eq - 1));
        std::string kind = text.substr(colon + 1);
        std::optional<int> nil;
        if (kind.rfind("nil", 0) == 0)
            nil = std::stoi(kind.substr(3));
        else if (kind != "free")
            throw ParseError("bad --param kind '" + kind + "'");
        bool found = false;
        for (Param& p : spec.params) {
            if (p.name == name) {
                p.degree = degree;
                p.nilpotent_order = nil;
                found = true;
            }
        }
        if (!found) throw UnknownName(name);
    }
}

std::pair<FormalGroupLaw, FglSpec> load_fgl(const Config& cfg) {
    bool have_catalog = !cfg.fgl_name.empty();
    bool have_spec = !cfg.spec_path.empty();
    if (have_catalog == have_spec)
        throw ParseError("exactly one of --fgl and --spec is required");
    FglSpec spec = have_catalog ? FormalGroupLaw::catalog_spec(cfg.fgl_name)
                                : FglSpec::from_file(cfg.spec_path);
    if (cfg.graded_override) spec.graded = *cfg.graded_override;
    apply_param_overrides(spec, cfg.param_overrides);
    return {FormalGroupLaw::from_spec(spec, cfg.trunc), spec};
}

std::string report_text(const VerifyReport& report) {
    std::ostringstream out;
    for (const auto& c : report.checks) {
        out << "  [" << (!c.applicable ? " n/a" : (c.pass ? "pass" : "FAIL")) << "] " << c.name;
        if (c.applicable && !c.pass) out << "  (first failing degree " << c.first_failing_degree << ")";
        out << "  certified to degree " << c.certified_order << "\n";
    }
    out << "certified order: " << report.certified_order << "\n";
    return out.str();
}

int cmd_present(const Config& cfg) {
    auto [fgl, spec] = load_fgl(cfg);
    Presentation p = emit_presentation(fgl, cfg.n, cfg.trunc, spec.hash());
    if (cfg.format == "json")
        emit(cfg, presentation_json(p).dump(2) + "\n");
    else if (cfg.format == "latex")
        emit(cfg, presentation_latex(p));
    else
        emit(cfg, presentation_text(p));
    return kExitPass;
}

int cmd_verify(const Config& cfg) {
    auto [fgl, spec] = load_fgl(cfg);
    VerifyReport report = verify_presentation(fgl, cfg.n, cfg.trunc);
    bool symmetric = fgl.is_symmetric();
    VerifyReport sym;
    if (symmetric) sym = symmetric_simplification(fgl);

    if (cfg.format == "json") {
        Presentation p = emit_presentation(fgl, cfg.n, cfg.trunc, spec.hash());
        json j = presentation_json(p, &report);
        if (symmetric) {
            json extra = json::array();
            for (const auto& c : sym.checks)
                extra.push_back({{"name", c.name}, {"status", c.pass ? "pass" : "fail"}});
            j["symmetric_simplification"] = extra;
        }
        emit(cfg, j.dump(2) + "\n");
    } else {
        std::ostringstream out;
        out << "verify " << fgl.name() << "  n=" << cfg.n << "  trunc=" << cfg.trunc << "\n";
        out << report_text(report);
        if (symmetric) {
            out << "symmetric formal group law; simplified form:\n";
            out << report_text(sym);
        }
        out << (report.all_pass() && sym.all_pass() ? "ALL RELATIONS PASS" : "RELATION FAILURE")
            << "\n";
        emit(cfg, out.str());
    }
    return report.all_pass() && sym.all_pass() ? kExitPass : kExitRelationFailure;
}

int cmd_genus(const Config& cfg, int N) {
    auto [fgl, spec] = load_fgl(cfg);
    std::vector<Coeff> table = fgl.genus(N);
    if (cfg.format == "json") {
        json j;
        j["fgl"] = fgl.name();
        json arr = json::array();
        for (const auto& c : table) arr.push_back(c.to_string());
        j["genus"] = arr;
        emit(cfg, j.dump(2) + "\n");
    } else {
        std::ostringstream out;
        for (int i = 0; i <= N; ++i)
            out << "rho(CP^" << i << ") = " << table[i].to_string() << "\n";
        emit(cfg, out.str());
    }
    return kExitPass;
}

int cmd_obstruction(const Config& cfg) {
    auto [fgl, spec] = load_fgl(cfg);
    auto [l, r] = braid_obstruction(fgl, cfg.trunc);
    auto [l2, r2] = deformation_lr(fgl);
    int upto = std::min({l.valid_order(), r.valid_order(), l2.valid_order(), r2.valid_order()});
    if (!l.equal_upto(l2, upto) || !r.equal_upto(r2, upto))
        throw Error("obstruction cross-check mismatch between solver and closed forms");
    bool holds = l.is_zero_upto(upto) && r.is_zero_upto(upto);
    std::ostringstream out;
    out << "l(x1,x2,x3) = " << l.to_string() << "\n";
    out << "r(x1,x2,x3) = " << r.to_string() << "\n";
    out << "cross-check against closed forms: agree to degree " << upto << "\n";
    out << (holds ? "BRAID HOLDS" : "BRAID FAILS") << "\n";
    emit(cfg, out.str());
    return kExitPass;
}

int cmd_perturb(const Config& cfg, const std::string& f1_text) {
    auto [fgl, spec] = load_fgl(cfg);
    TruncSeries F1 = parse_series(f1_text, fgl.ring(), {"x", "y"}, cfg.trunc);
    DeformationDelta d = first_order_delta(fgl, F1);
    if (cfg.format == "json") {
        json j;
        j["fgl"] = fgl.name();
        j["F1"] = F1.to_string({"x", "y"});
        j["ds"] = d.ds.to_string();
        j["dt"] = d.dt.to_string();
        j["dl"] = d.dl.to_string();
        j["dr"] = d.dr.to_string();
        emit(cfg, j.dump(2) + "\n");
    } else {
        std::ostringstream out;
        out << "delta s = " << d.ds.to_string() << "\n";
        out << "delta t = " << d.dt.to_string() << "\n";
        out << "delta l = " << d.dl.to_string() << "\n";
        out << "delta r = " << d.dr.to_string() << "\n";
        emit(cfg, out.str());
    }
    return kExitPass;
}

int cmd_render(const Config& cfg, const std::string& word) {
    WordDiagram d = WordDiagram::parse(word, cfg.n);
    emit(cfg, cfg.format == "latex" ? render_latex(d) : render_ascii(d));
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized nilHecke presentations from formal group laws"};
    app.require_subcommand(1);

    Config cfg;
    cfg.trunc = default_trunc();
    int genus_N = 5;
    std::string f1_text = "0";
    std::string word;

    auto add_common = [&](CLI::App* sub, bool needs_fgl) {
        if (needs_fgl) {
            sub->add_option("--fgl", cfg.fgl_name,
                            "catalog name: additive, multiplicative, chi, euler, "
                            "universal_rational(k)");
            sub->add_option("--spec", cfg.spec_path, "FGL spec JSON file");
            sub->add_option("--param", cfg.param_overrides,
                            "override a parameter declaration, name=degree:kind");
            auto* g = sub->add_flag("--graded", "force graded coefficients");
            auto* u = sub->add_flag("--ungraded", "force ungraded coefficients");
            sub->callback([&cfg, g, u] {
                if (g->count()) cfg.graded_override = true;
                if (u->count()) cfg.graded_override = false;
            });
        }
        sub->add_option("-n,--strands", cfg.n, "number of strands")->check(CLI::Range(2, 16));
        sub->add_option("--trunc", cfg.trunc, "truncation order")->check(CLI::Range(4, 64));
        sub->add_option("--format", cfg.format, "output format: text, json, latex");
        sub->add_option("-o,--output", cfg.output, "write output to a file");
        sub->add_option("--seed", cfg.seed, "seed for randomized runs");
    };

    auto* present = app.add_subcommand("present", "emit the GNH_n presentation");
    add_common(present, true);
    auto* verify = app.add_subcommand("verify", "verify every relation exactly");
    add_common(verify, true);
    auto* genus = app.add_subcommand("genus", "print the genus table rho(CP^0..CP^N)");
    add_common(genus, true);
    genus->add_option("-N", genus_N, "largest projective space")->check(CLI::Range(0, 63));
    auto* obstruction = app.add_subcommand("obstruction", "solve the braid obstruction (n=3)");
    add_common(obstruction, true);
    auto* perturb = app.add_subcommand("perturb", "first-order deformation deltas for F + eps*F1");
    add_common(perturb, true);
    perturb->add_option("--f1", f1_text, "perturbation series F1(x,y)")->required();
    auto* render = app.add_subcommand("render", "render a generator word as a strand diagram");
    add_common(render, false);
    render->add_option("word", word, "whitespace-separated x<i> / d<j> tokens")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    try {
        if (present->parsed()) return cmd_present(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (genus->parsed()) return cmd_genus(cfg, genus_N);
        if (obstruction->parsed()) {
            cfg.n = 3;
            return cmd_obstruction(cfg);
        }
        if (perturb->parsed()) return cmd_perturb(cfg, f1_text);
        if (render->parsed()) return cmd_render(cfg, word);
        std::cerr << "no subcommand\n";
        return kExitInputError;
    } catch (const AxiomViolation& e) {
        std::cerr << "error: axiom violation: " << e.axiom
                  << " fails at degree " << e.degree << "\n";
        return kExitInputError;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const UnknownName& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const GradingViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const IndexOutOfRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const BeyondValidOrder& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const Error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
