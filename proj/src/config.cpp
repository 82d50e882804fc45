/**
 * config.cpp
 *
 * Schema-1 JSON configs.  Parsing reports the offending field path (or the
 * line for syntax errors); serialization uses insertion-ordered keys so the
 * emitted bytes are deterministic and round-trip losslessly.
 */
#include "hdim/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "hdim/errors.hpp"

namespace hdim {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
    fail(ErrorCode::InvalidConfig, path + ": " + msg);
}

const Json& need(const Json& j, const char* key, const std::string& path) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) bad(path + "." + key, "missing field");
    return *it;
}

Rat rat_value(const Json& j, const std::string& path) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const Error& e) {
            bad(path, e.what());
        }
    }
    bad(path, "expected a rational \"p/q\" string or an integer");
}

long long_value(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) bad(path, "expected an integer");
    return j.get<long>();
}

Mat<Rat> mat_value(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) bad(path, "expected a nonempty array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = j[0].is_array() ? static_cast<int>(j[0].size()) : 0;
    if (cols == 0) bad(path, "expected array rows of rationals");
    Mat<Rat> m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            bad(path, "rows must all have " + std::to_string(cols) + " entries");
        for (int k = 0; k < cols; ++k)
            m(i, k) = rat_value(row[static_cast<std::size_t>(k)],
                                path + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
    return m;
}

MatrixFamily family_value(const Json& j, const std::string& path) {
    if (!j.is_object()) bad(path, "expected an object");
    const std::string kind = need(j, "kind", path).get<std::string>();
    MatrixFamily fam;
    if (kind == "power" || kind == "power_minus_identity" || kind == "scaled_power") {
        const Mat<Rat> base = mat_value(need(j, "base", path), path + ".base");
        if (base.rows() != base.cols()) bad(path + ".base", "matrix must be square");
        if (kind == "power") {
            fam = MatrixFamily::power(base);
        } else if (kind == "power_minus_identity") {
            fam = MatrixFamily::power_minus_identity(base);
        } else {
            const Rat sc = rat_value(need(j, "scale", path), path + ".scale");
            if (denom(sc) != 1) bad(path + ".scale", "scale must be an integer");
            fam = MatrixFamily::scaled_power(numer(sc), base);
        }
    } else if (kind == "diagonal") {
        const Json& rows = need(j, "rows", path);
        if (!rows.is_array() || rows.empty()) bad(path + ".rows", "expected a nonempty array");
        std::vector<Vec<Rat>> entries;
        for (std::size_t n = 0; n < rows.size(); ++n) {
            const std::string rp = path + ".rows[" + std::to_string(n) + "]";
            if (!rows[n].is_array() || rows[n].empty()) bad(rp, "expected a nonempty array");
            Vec<Rat> row;
            for (std::size_t k = 0; k < rows[n].size(); ++k)
                row.push_back(rat_value(rows[n][k], rp + "[" + std::to_string(k) + "]"));
            entries.push_back(std::move(row));
        }
        const bool log_scale =
            j.contains("log_scale") && j["log_scale"].is_boolean() && j["log_scale"].get<bool>();
        fam = MatrixFamily::diagonal(std::move(entries), log_scale);
    } else if (kind == "jordan") {
        const Json& blocks = need(j, "blocks", path);
        if (!blocks.is_array() || blocks.empty()) bad(path + ".blocks", "expected a nonempty array");
        std::vector<JordanBlockSpec> bs;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            const std::string bp = path + ".blocks[" + std::to_string(i) + "]";
            if (!blocks[i].is_object()) bad(bp, "expected an object");
            JordanBlockSpec b;
            b.lambda = rat_value(need(blocks[i], "modulus", bp), bp + ".modulus");
            b.size = static_cast<int>(long_value(need(blocks[i], "size", bp), bp + ".size"));
            bs.push_back(std::move(b));
        }
        fam = MatrixFamily::jordan(std::move(bs));
    } else if (kind == "explicit") {
        const Json& ms = need(j, "matrices", path);
        if (!ms.is_array() || ms.empty()) bad(path + ".matrices", "expected a nonempty array");
        std::vector<Mat<Rat>> list;
        for (std::size_t i = 0; i < ms.size(); ++i)
            list.push_back(mat_value(ms[i], path + ".matrices[" + std::to_string(i) + "]"));
        fam = MatrixFamily::explicit_list(std::move(list));
    } else {
        bad(path + ".kind", "unknown family kind \"" + kind + "\"");
    }
    validate_family(fam);
    return fam;
}

PsiSpec psi_value_of(const Json& j, const std::string& path) {
    if (!j.is_object()) bad(path, "expected an object");
    const std::string kind = need(j, "kind", path).get<std::string>();
    PsiSpec psi;
    if (kind == "exponential") {
        psi = PsiSpec::exponential(rat_value(need(j, "tau", path), path + ".tau"));
    } else if (kind == "power_law") {
        psi = PsiSpec::power_law(rat_value(need(j, "alpha", path), path + ".alpha"));
    } else if (kind == "geometric") {
        psi = PsiSpec::geometric(rat_value(need(j, "factor", path), path + ".factor"),
                                 rat_value(need(j, "ratio", path), path + ".ratio"));
    } else if (kind == "table") {
        const Json& vals = need(j, "table", path);
        if (!vals.is_array() || vals.empty()) bad(path + ".table", "expected a nonempty array");
        std::vector<Rat> table;
        for (std::size_t i = 0; i < vals.size(); ++i)
            table.push_back(rat_value(vals[i], path + ".table[" + std::to_string(i) + "]"));
        psi = PsiSpec::table_values(std::move(table));
    } else {
        bad(path + ".kind", "unknown psi kind \"" + kind + "\"");
    }
    validate_psi(psi);
    return psi;
}

Json rat_json(const Rat& q) { return Json(format_rational(q)); }

Json mat_json(const Mat<Rat>& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(rat_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json family_json(const MatrixFamily& fam) {
    Json j = Json::object();
    switch (fam.kind) {
        case FamilyKind::Power:
            j["kind"] = "power";
            j["base"] = mat_json(fam.base);
            break;
        case FamilyKind::PowerMinusIdentity:
            j["kind"] = "power_minus_identity";
            j["base"] = mat_json(fam.base);
            break;
        case FamilyKind::ScaledPower:
            j["kind"] = "scaled_power";
            j["scale"] = fam.scale.str();
            j["base"] = mat_json(fam.base);
            break;
        case FamilyKind::Diagonal: {
            j["kind"] = "diagonal";
            j["log_scale"] = fam.diag_log_scale;
            Json rows = Json::array();
            for (const auto& row : fam.diag_entries) {
                Json r = Json::array();
                for (const Rat& e : row) r.push_back(rat_json(e));
                rows.push_back(std::move(r));
            }
            j["rows"] = std::move(rows);
            break;
        }
        case FamilyKind::Jordan: {
            j["kind"] = "jordan";
            Json blocks = Json::array();
            for (const auto& b : fam.blocks) {
                Json bj = Json::object();
                bj["modulus"] = rat_json(b.lambda);
                bj["size"] = b.size;
                blocks.push_back(std::move(bj));
            }
            j["blocks"] = std::move(blocks);
            break;
        }
        case FamilyKind::ExplicitList: {
            j["kind"] = "explicit";
            Json ms = Json::array();
            for (const auto& m : fam.matrices) ms.push_back(mat_json(m));
            j["matrices"] = std::move(ms);
            break;
        }
    }
    return j;
}

Json psi_json(const PsiSpec& psi) {
    Json j = Json::object();
    switch (psi.kind) {
        case PsiKind::Exponential:
            j["kind"] = "exponential";
            j["tau"] = rat_json(psi.tau);
            break;
        case PsiKind::PowerLaw:
            j["kind"] = "power_law";
            j["alpha"] = rat_json(psi.alpha);
            break;
        case PsiKind::Geometric:
            j["kind"] = "geometric";
            j["factor"] = rat_json(psi.factor);
            j["ratio"] = rat_json(psi.ratio);
            break;
        case PsiKind::Table: {
            j["kind"] = "table";
            Json vals = Json::array();
            for (const Rat& v : psi.table) vals.push_back(rat_json(v));
            j["table"] = std::move(vals);
            break;
        }
    }
    return j;
}

RunConfig config_from_json(const Json& j) {
    if (!j.is_object()) bad("config", "expected a JSON object");
    const Json& schema = need(j, "schema", "config");
    if (!schema.is_number_integer() || schema.get<long>() != 1)
        bad("config.schema", "unsupported schema version (expected 1)");

    RunConfig cfg;
    cfg.family = family_value(need(j, "family", "config"), "config.family");
    cfg.psi = psi_value_of(need(j, "psi", "config"), "config.psi");

    if (j.contains("tau_grid") && !j["tau_grid"].is_null()) {
        const Json& grid = j["tau_grid"];
        if (!grid.is_array()) bad("config.tau_grid", "expected an array");
        for (std::size_t i = 0; i < grid.size(); ++i)
            cfg.tau_grid.push_back(rat_value(grid[i], "config.tau_grid[" + std::to_string(i) + "]"));
        for (std::size_t i = 1; i < cfg.tau_grid.size(); ++i)
            if (!(cfg.tau_grid[i - 1] < cfg.tau_grid[i]))
                bad("config.tau_grid", "grid must be strictly increasing");
    }

    const Json& range = need(j, "n_range", "config");
    if (!range.is_array() || range.size() != 2) bad("config.n_range", "expected [lo, hi]");
    cfg.n_lo = long_value(range[0], "config.n_range[0]");
    cfg.n_hi = long_value(range[1], "config.n_range[1]");
    if (cfg.n_lo < 1 || cfg.n_hi < cfg.n_lo) bad("config.n_range", "need 1 <= lo <= hi");

    if (j.contains("mode")) {
        const std::string mode = j["mode"].get<std::string>();
        if (mode == "analytic") {
            cfg.mode = BoundsMode::Analytic;
        } else if (mode == "numeric") {
            cfg.mode = BoundsMode::Numeric;
        } else {
            bad("config.mode", "expected \"analytic\" or \"numeric\"");
        }
    }
    if (j.contains("rational")) {
        if (!j["rational"].is_boolean()) bad("config.rational", "expected a boolean");
        cfg.rational = j["rational"].get<bool>();
    }
    if (j.contains("budget")) {
        if (!j["budget"].is_number_integer()) bad("config.budget", "expected an integer");
        cfg.budget = j["budget"].get<long long>();
        if (cfg.budget < 1) bad("config.budget", "budget must be positive");
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer()) bad("config.seed", "expected an integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("out")) {
        if (!j["out"].is_string()) bad("config.out", "expected a string");
        cfg.out_dir = j["out"].get<std::string>();
    }
    return cfg;
}

Json parse_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte, text.size());
        for (std::size_t i = 0; i < stop; ++i)
            if (text[i] == '\n') ++line;
        fail(ErrorCode::InvalidConfig,
             "line " + std::to_string(line) + ": " + std::string(e.what()));
    }
}

}  // namespace

RunConfig parse_config(const std::string& text) { return config_from_json(parse_text(text)); }

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::InvalidConfig, "cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
    Json j = Json::object();
    j["schema"] = 1;
    j["family"] = family_json(cfg.family);
    j["psi"] = psi_json(cfg.psi);
    if (!cfg.tau_grid.empty()) {
        Json grid = Json::array();
        for (const Rat& t : cfg.tau_grid) grid.push_back(rat_json(t));
        j["tau_grid"] = std::move(grid);
    }
    j["n_range"] = Json::array({cfg.n_lo, cfg.n_hi});
    j["mode"] = cfg.mode == BoundsMode::Analytic ? "analytic" : "numeric";
    j["rational"] = cfg.rational;
    j["budget"] = cfg.budget;
    j["seed"] = cfg.seed;
    j["out"] = cfg.out_dir;
    return j.dump(2) + "\n";
}

std::string format_sig9(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string bounds_csv(const BoundsReport& rep) {
    std::ostringstream out;
    out << "n,tau_n,s_lower,arg_lower,s_upper,arg_upper,s_hat,arg_hat\n";
    for (const BoundsRow& r : rep.rows) {
        out << r.n << ',' << format_sig9(r.tau_n) << ',' << format_sig9(r.s_lower) << ','
            << r.arg_lower << ',' << format_sig9(r.s_upper) << ',' << r.arg_upper << ','
            << format_sig9(r.s_hat) << ',' << r.arg_hat << '\n';
    }
    out << "aggregate," << ',' << format_sig9(rep.s_lower) << ',' << rep.arg_lower << ','
        << format_sig9(rep.s_upper) << ',' << rep.arg_upper << ',' << format_sig9(rep.s_hat)
        << ',' << rep.arg_hat << '\n';
    return out.str();
}

std::string bounds_json(const BoundsReport& rep) {
    Json j = Json::object();
    j["schema"] = 1;
    j["analytic"] = rep.analytic;
    j["regime"] = rep.regime;
    j["oscillation"] = rep.oscillation;
    Json agg = Json::object();
    agg["s_lower"] = rep.s_lower;
    agg["arg_lower"] = rep.arg_lower;
    agg["s_upper"] = rep.s_upper;
    agg["arg_upper"] = rep.arg_upper;
    agg["s_hat"] = rep.s_hat;
    agg["arg_hat"] = rep.arg_hat;
    j["aggregate"] = std::move(agg);
    Json rows = Json::array();
    for (const BoundsRow& r : rep.rows) {
        Json row = Json::object();
        row["n"] = r.n;
        row["tau_n"] = r.tau_n;
        row["s_lower"] = r.s_lower;
        row["arg_lower"] = r.arg_lower;
        row["s_upper"] = r.s_upper;
        row["arg_upper"] = r.arg_upper;
        row["s_hat"] = r.s_hat;
        row["arg_hat"] = r.arg_hat;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

BoundsReport bounds_from_json(const std::string& text) {
    const Json j = parse_text(text);
    if (!j.is_object()) bad("report", "expected a JSON object");
    const Json& schema = need(j, "schema", "report");
    if (!schema.is_number_integer() || schema.get<long>() != 1)
        bad("report.schema", "unsupported schema version (expected 1)");
    BoundsReport rep;
    rep.analytic = need(j, "analytic", "report").get<bool>();
    rep.regime = need(j, "regime", "report").get<std::string>();
    rep.oscillation = need(j, "oscillation", "report").get<double>();
    const Json& agg = need(j, "aggregate", "report");
    rep.s_lower = need(agg, "s_lower", "report.aggregate").get<double>();
    rep.arg_lower = need(agg, "arg_lower", "report.aggregate").get<int>();
    rep.s_upper = need(agg, "s_upper", "report.aggregate").get<double>();
    rep.arg_upper = need(agg, "arg_upper", "report.aggregate").get<int>();
    rep.s_hat = need(agg, "s_hat", "report.aggregate").get<double>();
    rep.arg_hat = need(agg, "arg_hat", "report.aggregate").get<int>();
    const Json& rows = need(j, "rows", "report");
    if (!rows.is_array()) bad("report.rows", "expected an array");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::string rp = "report.rows[" + std::to_string(i) + "]";
        const Json& row = rows[i];
        BoundsRow r;
        r.n = need(row, "n", rp).get<long>();
        r.tau_n = need(row, "tau_n", rp).get<double>();
        r.s_lower = need(row, "s_lower", rp).get<double>();
        r.arg_lower = need(row, "arg_lower", rp).get<int>();
        r.s_upper = need(row, "s_upper", rp).get<double>();
        r.arg_upper = need(row, "arg_upper", rp).get<int>();
        r.s_hat = need(row, "s_hat", rp).get<double>();
        r.arg_hat = need(row, "arg_hat", rp).get<int>();
        rep.rows.push_back(r);
    }
    return rep;
}

}  // namespace hdim
