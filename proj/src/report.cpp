#include "zeta1d/report.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "zeta1d/ledger.hpp"
#include "zeta1d/parser.hpp"
#include "zeta1d/zeta.hpp"

namespace zeta1d {

namespace {

using nlohmann::json;

struct Options {
    std::string command;
    std::vector<std::string> expressions;
    long n = 0;
    bool n_given = false;
    std::string mode = "auto"; // auto | exact | numeric
    long precision = 128;
    std::vector<std::string> data_files;
    std::string format = "text";
};

int exit_for(ErrCode code) {
    switch (code) {
    case ErrCode::IncompleteProfile: return 3;
    case ErrCode::InternalInconsistency: return 4;
    default: return 2;
    }
}

std::string rational_str(const mpq_class& q) {
    return q.get_str();
}

json analytic_json(const SpecialValue& sv) {
    json a;
    a["order"] = sv.order;
    a["mode"] = sv.mode == ValueMode::Exact ? "exact" : "numeric";
    a["sign"] = sv.sign() > 0 ? "+" : (sv.sign() < 0 ? "-" : "?");
    if (sv.mode == ValueMode::Exact) {
        a["value"] = rational_str(sv.exact);
    } else {
        a["value_decimal"] = sv.numeric.to_decimal(40);
        a["error_bound"] = sv.numeric.radius_decimal();
    }
    return a;
}

json ledger_json(const MotivicProfile& m) {
    json l;
    l["rank_minus1"] = m.rank_minus1;
    l["r1"] = m.r1;
    l["tors_minus1"] = m.tors_minus1 ? json(m.tors_minus1->get_str()) : json(nullptr);
    l["ord_H0"] = m.ord_h0 ? json(m.ord_h0->get_str()) : json(nullptr);
    l["ord_H1"] = m.ord_h1 ? json(m.ord_h1->get_str()) : json(nullptr);
    l["multiplier"] = m.multiplier ? json(rational_str(*m.multiplier)) : json(nullptr);
    return l;
}

json prediction_json(const Prediction& p) {
    json j;
    j["order"] = p.order;
    j["delta"] = p.delta_exponent;
    j["cofactor"] = rational_str(p.cofactor);
    switch (p.regulator) {
    case Regulator::Kind::One:
        j["regulator"] = "one";
        j["value"] = rational_str(*p.exact_value);
        break;
    case Regulator::Kind::Symbolic:
        j["regulator"] = "symbolic";
        break;
    case Regulator::Kind::Numeric:
        j["regulator"] = "numeric";
        j["value_decimal"] = p.numeric_value->to_decimal(40);
        j["error_bound"] = p.numeric_value->radius_decimal();
        break;
    }
    return j;
}

void render_text(const json& report, std::ostream& out) {
    out << "expression: " << report.at("expression").get<std::string>() << "\n";
    if (report.contains("n")) out << "n:          " << report.at("n").get<long>() << "\n";
    if (report.contains("places")) {
        const auto& p = report.at("places");
        out << "places:     r1=" << p.at("r1").get<long>() << " r2=" << p.at("r2").get<long>()
            << " d_n=" << p.at("d_n").get<long>() << " delta=" << p.at("delta").get<long>()
            << "\n";
    }
    if (report.contains("analytic")) {
        const auto& a = report.at("analytic");
        out << "analytic:   order " << a.at("order").get<long>();
        if (a.contains("value"))
            out << ", exact " << a.at("sign").get<std::string>()
                << (a.at("value").get<std::string>()[0] == '-'
                        ? a.at("value").get<std::string>().substr(1)
                        : a.at("value").get<std::string>());
        else
            out << ", numeric " << a.at("value_decimal").get<std::string>() << " (+/- "
                << a.at("error_bound").get<std::string>() << ")";
        out << "\n";
    }
    if (report.contains("ledger")) {
        const auto& l = report.at("ledger");
        out << "ledger:     rank " << l.at("rank_minus1").get<long>() << ", multiplier "
            << (l.at("multiplier").is_null() ? std::string("unknown")
                                             : l.at("multiplier").get<std::string>());
        if (!l.at("tors_minus1").is_null() && !l.at("ord_H0").is_null() &&
            !l.at("ord_H1").is_null())
            out << " [tors=" << l.at("tors_minus1").get<std::string>()
                << " H0=" << l.at("ord_H0").get<std::string>()
                << " H1=" << l.at("ord_H1").get<std::string>() << "]";
        out << "\n";
    }
    if (report.contains("prediction")) {
        const auto& p = report.at("prediction");
        out << "predicted:  2^" << p.at("delta").get<long>() << " cofactor "
            << p.at("cofactor").get<std::string>();
        if (p.contains("value"))
            out << " = " << p.at("value").get<std::string>();
        else if (p.contains("value_decimal"))
            out << " = " << p.at("value_decimal").get<std::string>();
        else
            out << " * R (regulator symbolic)";
        out << "\n";
    }
    if (report.contains("weil_etale")) {
        const auto& w = report.at("weil_etale");
        out << "weil-etale: H1 rank " << w.at("rank_H1").get<long>() << " torsion "
            << w.at("tors_H1").get<std::string>() << "; H2 rank " << w.at("rank_H2").get<long>()
            << " torsion " << w.at("tors_H2").get<std::string>() << "; H3 torsion "
            << w.at("tors_H3").get<std::string>() << "\n";
    }
    if (report.contains("regulator")) {
        const auto& r = report.at("regulator");
        out << "regulator:  " << r.at("value_decimal").get<std::string>() << " (+/- "
            << r.at("error_bound").get<std::string>() << ")\n";
    }
    if (report.contains("verdict"))
        out << "verdict:    " << report.at("verdict").get<std::string>() << "\n";
    for (const auto& d : report.value("diagnostics", json::array()))
        out << "note:       " << d.get<std::string>() << "\n";
}

SpecialValue analytic_value(const ZetaFactorization& f, long n, const Options& opt) {
    if (opt.mode == "exact") return special_value(f, n, ValueMode::Exact);
    if (opt.mode == "numeric") return special_value(f, n, ValueMode::Numeric, opt.precision);
    try {
        return special_value(f, n, ValueMode::Exact);
    } catch (const Error& e) {
        if (e.code() != ErrCode::ExactUnavailable) throw;
        return special_value(f, n, ValueMode::Numeric, opt.precision);
    }
}

// Builds one report object; returns the exit code contribution.
int run_one(const Options& opt, const std::string& text, const BaseDataSet& data, json& report) {
    report["command"] = opt.command;
    SchemeExpr expr = parse(text);
    report["expression"] = print(expr);

    if (opt.command == "parse") return 0;

    long n = opt.n;
    report["n"] = n;

    if (opt.command == "info") {
        PlaceProfile places = archimedean_profile(expr);
        json p;
        p["r1"] = places.r1;
        p["r2"] = places.r2;
        p["d_n"] = vanishing_order(expr, n);
        p["delta"] = delta(expr, n);
        json chars = json::array();
        for (long c : places.generic_chars) chars.push_back(c);
        p["generic_characteristics"] = chars;
        report["places"] = p;
        return 0;
    }

    if (opt.command == "zeta") {
        ZetaFactorization f = factorize(expr);
        report["analytic"] = analytic_json(analytic_value(f, n, opt));
        return 0;
    }

    if (opt.command == "predict") {
        MotivicProfile profile = scheme_profile(expr, n, data);
        report["ledger"] = ledger_json(profile);
        Regulator reg =
            profile.rank_minus1 == 0 ? Regulator::one() : Regulator::symbolic();
        Prediction pred = predicted_special_value(profile, n, reg);
        report["prediction"] = prediction_json(pred);
        return 0;
    }

    if (opt.command == "weil-etale") {
        MotivicProfile profile = scheme_profile(expr, n, data);
        report["ledger"] = ledger_json(profile);
        WeilEtaleProfile w = weil_etale_profile(profile, n);
        json jw;
        jw["rank_H1"] = w.rank_h1;
        jw["tors_H1"] = w.tors_h1.get_str();
        jw["rank_H2"] = w.rank_h2;
        jw["tors_H2"] = w.tors_h2.get_str();
        jw["tors_H3"] = w.tors_h3.get_str();
        report["weil_etale"] = jw;
        return 0;
    }

    if (opt.command == "infer-regulator") {
        ZetaFactorization f = factorize(expr);
        SpecialValue sv = special_value(f, n, ValueMode::Numeric, opt.precision);
        report["analytic"] = analytic_json(sv);
        MotivicProfile profile = scheme_profile(expr, n, data);
        report["ledger"] = ledger_json(profile);
        RealBall r = infer_regulator(sv, profile, n);
        json jr;
        jr["value_decimal"] = r.to_decimal(40);
        jr["error_bound"] = r.radius_decimal();
        report["regulator"] = jr;
        return 0;
    }

    // check
    json diagnostics = json::array();
    ZetaFactorization f = factorize(expr);
    SpecialValue sv = analytic_value(f, n, opt);
    report["analytic"] = analytic_json(sv);

    MotivicProfile profile = scheme_profile(expr, n, data);
    report["ledger"] = ledger_json(profile);

    if (!profile.multiplier) {
        report["verdict"] = "INSUFFICIENT_DATA";
        diagnostics.push_back("no cohomology data covers this scheme at this weight");
        report["diagnostics"] = diagnostics;
        return 3;
    }

    if (sv.order != profile.rank_minus1) {
        report["verdict"] = "MISMATCH";
        diagnostics.push_back("analytic vanishing order " + std::to_string(sv.order) +
                              " != cohomological rank " + std::to_string(profile.rank_minus1));
        report["diagnostics"] = diagnostics;
        return 1;
    }

    if (profile.rank_minus1 > 0) {
        Prediction pred = predicted_special_value(profile, n, Regulator::symbolic());
        report["prediction"] = prediction_json(pred);
        RealBall reg = infer_regulator(sv, profile, n);
        json jr;
        jr["value_decimal"] = reg.to_decimal(40);
        jr["error_bound"] = reg.radius_decimal();
        report["regulator"] = jr;
        report["verdict"] = "SYMBOLIC";
        diagnostics.push_back("d_n > 0: prediction is 2^delta * M * R with R inferred above");
        report["diagnostics"] = diagnostics;
        return 0;
    }

    Prediction pred = predicted_special_value(profile, n, Regulator::one());
    report["prediction"] = prediction_json(pred);
    if (sv.mode == ValueMode::Exact) {
        if (sv.abs_exact() == *pred.exact_value) {
            report["verdict"] = "EXACT_MATCH";
        } else {
            report["verdict"] = "MISMATCH";
            diagnostics.push_back("|analytic| = " + rational_str(sv.abs_exact()) +
                                  " but prediction = " + rational_str(*pred.exact_value));
        }
    } else {
        if (sv.numeric.abs().contains(*pred.exact_value)) {
            report["verdict"] = "NUMERIC_MATCH";
            report["match_bound"] = sv.numeric.radius_decimal();
        } else {
            report["verdict"] = "MISMATCH";
            diagnostics.push_back("numeric enclosure does not contain the predicted rational");
        }
    }
    report["diagnostics"] = diagnostics;
    return report["verdict"] == "MISMATCH" ? 1 : 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opt;

    CLI::App app{"exact special values of zeta functions of one-dimensional arithmetic schemes"};
    app.require_subcommand(1);
    const std::vector<std::string> commands = {"parse", "info",       "zeta",           "predict",
                                               "check", "weil-etale", "infer-regulator"};
    for (const auto& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("expression", opt.expressions, "scheme expression(s)")->required();
        if (name != "parse")
            sub->add_option("--n", opt.n, "negative integer weight")->required();
        sub->add_option("--mode", opt.mode, "exact|numeric|auto")
            ->check(CLI::IsMember({"exact", "numeric", "auto"}));
        sub->add_option("--precision", opt.precision, "precision in bits (default 128)");
        sub->add_option("--data", opt.data_files, "additional cohomology data file (repeatable)");
        sub->add_option("--format", opt.format, "text|json")
            ->check(CLI::IsMember({"text", "json"}));
        sub->callback([&opt, name]() { opt.command = name; });
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    if (opt.command != "parse" && (opt.n >= 0 || opt.n < -1000000)) {
        err << "usage error: --n must be strictly negative (magnitude at most 10^6)\n";
        return 2;
    }
    if (opt.precision < 64 || opt.precision > 65536) {
        err << "usage error: --precision must lie in [64, 65536]\n";
        return 2;
    }

    BaseDataSet data = BaseDataSet::shipped();
    try {
        for (const auto& file : opt.data_files) data.load_file(file);
    } catch (const Error& e) {
        err << "error " << e.what() << "\n";
        return exit_for(e.code());
    }

    json reports = json::array();
    int exit_code = 0;
    for (const auto& text : opt.expressions) {
        json report;
        try {
            exit_code = std::max(exit_code, run_one(opt, text, data, report));
        } catch (const Error& e) {
            if (opt.format == "json") {
                report["command"] = opt.command;
                report["input"] = text;
                report["error"] = {{"code", err_name(e.code())}, {"message", e.what()}};
                if (e.span()) {
                    report["error"]["span"] = {{"start", e.span()->start},
                                               {"end", e.span()->end},
                                               {"line", e.span()->line},
                                               {"column", e.span()->column}};
                }
            } else {
                err << "error " << e.what();
                if (e.span())
                    err << " (line " << e.span()->line << ", column " << e.span()->column << ")";
                err << "\n";
            }
            exit_code = std::max(exit_code, exit_for(e.code()));
            if (opt.format != "json") continue;
        }
        reports.push_back(report);
    }

    if (opt.format == "json") {
        if (reports.size() == 1)
            out << reports[0].dump(2) << "\n";
        else
            out << reports.dump(2) << "\n";
    } else {
        bool first = true;
        for (const auto& report : reports) {
            if (!report.is_object() || report.empty()) continue;
            if (!first) out << "\n";
            first = false;
            if (report.contains("error")) continue;
            render_text(report, out);
        }
    }
    return exit_code;
}

} // namespace zeta1d
