#include "qsr/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qsr/errors.hpp"

namespace qsr {

using nlohmann::json;

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_g17(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw ParseError("not a decimal number: '" + s + "'");
    return v;
}

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot open '" + path + "' for writing");
    return out;
}

json parse_json(const std::string& text, const std::string& where) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError(where + ": invalid JSON");
    return j;
}

}  // namespace

json code_to_json(const CodeSpec& code) {
    json j;
    j["format"] = "qsr-code";
    j["id"] = code.id();
    j["distance"] = code.distance;
    j["layout"] = layout_name(code.layout);
    j["n"] = code.n;
    j["k"] = code.k;
    j["z_checks"] = code.z_checks;
    j["x_checks"] = code.x_checks;
    j["x_logical"] = code.x_logical;
    j["z_logical"] = code.z_logical;
    j["column_order"] = code.column_order;
    json geo = json::array();
    for (const auto& g : code.geometry)
        geo.push_back({{"row", g.row}, {"col", g.col}, {"boundary", g.on_boundary}});
    j["geometry"] = geo;
    return j;
}

CodeSpec code_from_json(const json& j) {
    try {
        CodeSpec code;
        code.distance = j.at("distance").get<int>();
        code.layout = layout_from_name(j.at("layout").get<std::string>());
        code.n = j.at("n").get<int>();
        code.k = j.at("k").get<int>();
        code.z_checks = j.at("z_checks").get<std::vector<std::vector<int>>>();
        code.x_checks = j.at("x_checks").get<std::vector<std::vector<int>>>();
        code.x_logical = j.at("x_logical").get<std::vector<int>>();
        code.z_logical = j.at("z_logical").get<std::vector<int>>();
        code.column_order = j.at("column_order").get<std::vector<int>>();
        for (const auto& g : j.at("geometry")) {
            QubitGeometry q;
            q.row = g.at("row").get<double>();
            q.col = g.at("col").get<double>();
            q.on_boundary = g.at("boundary").get<bool>();
            code.geometry.push_back(q);
        }
        return code;
    } catch (const json::exception& e) {
        throw ParseError(std::string("code file: ") + e.what());
    }
}

void write_code(const std::string& path, const CodeSpec& code) {
    auto out = open_out(path);
    out << code_to_json(code).dump(2) << '\n';
}

CodeSpec read_code(const std::string& path) {
    auto in = open_in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return code_from_json(parse_json(ss.str(), path));
}

void write_batch(std::ostream& out, const SampleBatch& batch) {
    json header;
    header["format"] = "qsr-batch";
    header["code_id"] = batch.code_id;
    header["p"] = format_g17(batch.p);
    header["seed"] = batch.seed;
    header["syndrome_bits"] = batch.syndrome_bits;
    header["n"] = batch.size();
    out << header.dump() << '\n';
    for (const auto& r : batch.records) {
        json rec;
        rec["s"] = Syndrome::from_packed(batch.keys[r.key_id], batch.syndrome_bits).hex();
        rec["x"] = static_cast<int>(r.x);
        rec["cls"] = class_name(r.decoder_class);
        rec["w_mwpm"] = r.w_mwpm == kNoWeight ? json() : json(r.w_mwpm);
        rec["w_comp"] = r.w_comp == kNoWeight ? json() : json(r.w_comp);
        rec["gap"] = r.gap == kNoWeight ? json() : json(r.gap);
        rec["log_p_s"] = r.has_log_ps() ? json(format_g17(r.log_ps)) : json();
        out << rec.dump() << '\n';
    }
}

void write_batch(const std::string& path, const SampleBatch& batch) {
    auto out = open_out(path);
    write_batch(out, batch);
}

SampleBatch read_batch(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw EmptyInputError("batch file is empty");
    json header = parse_json(line, "batch header");
    SampleBatch batch;
    try {
        if (header.at("format").get<std::string>() != "qsr-batch")
            throw ParseError("not a batch file");
        batch.code_id = header.at("code_id").get<std::string>();
        batch.p = parse_g17(header.at("p").get<std::string>());
        batch.seed = header.at("seed").get<uint64_t>();
        batch.syndrome_bits = header.at("syndrome_bits").get<int>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("batch header: ") + e.what());
    }

    uint64_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json rec = parse_json(line, "line " + std::to_string(lineno));
        try {
            SampleRecord r;
            Syndrome s = Syndrome::from_hex(rec.at("s").get<std::string>(), batch.syndrome_bits);
            r.key_id = batch.intern(s.packed_key());
            r.x = static_cast<uint8_t>(rec.at("x").get<int>());
            std::string cls = rec.at("cls").get<std::string>();
            if (cls != "I" && cls != "X")
                throw ParseError("unknown class '" + cls + "'");
            r.decoder_class = cls == "X" ? LogicalClass::X : LogicalClass::I;
            if (!rec.at("w_mwpm").is_null()) r.w_mwpm = rec.at("w_mwpm").get<int16_t>();
            if (!rec.at("w_comp").is_null()) r.w_comp = rec.at("w_comp").get<int16_t>();
            if (!rec.at("gap").is_null()) r.gap = rec.at("gap").get<int16_t>();
            if (!rec.at("log_p_s").is_null())
                r.log_ps = parse_g17(rec.at("log_p_s").get<std::string>());
            batch.records.push_back(r);
        } catch (const json::exception& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (batch.records.empty()) throw EmptyInputError("batch file has no records");
    batch.finalize_counts();
    return batch;
}

SampleBatch read_batch(const std::string& path) {
    auto in = open_in(path);
    return read_batch(in);
}

json estimate_to_json(const Estimate& est) {
    json j;
    j["p_l"] = format_g17(est.p_l);
    j["std_err"] = format_g17(est.std_err);
    j["method"] = est.method;
    j["alpha"] = est.alpha;
    j["c"] = std::isnan(est.c) ? json() : json(est.c);
    j["acceptance"] = format_g17(est.acceptance);
    j["effective_n"] = est.effective_n;
    return j;
}

json bounds_to_json(const SampleBounds& bounds) {
    json j;
    j["generic"] = format_g17(bounds.generic);
    j["low_p"] = format_g17(bounds.low_p);
    j["high_p"] = format_g17(bounds.high_p);
    return j;
}

json fit_to_json(const ScalingFit& fit) {
    json j;
    j["p_th"] = format_g17(fit.p_th);
    j["p_th_err"] = format_g17(fit.p_th_err);
    j["nu"] = format_g17(fit.nu);
    j["nu_err"] = format_g17(fit.nu_err);
    j["chi2"] = format_g17(fit.chi2);
    json coeff = json::array();
    for (double c : fit.coeff) coeff.push_back(format_g17(c));
    j["coeff"] = coeff;
    return j;
}

json validation_to_json(const ValidationReport& report) {
    json j;
    j["passed"] = report.all_passed();
    json entries = json::array();
    for (const auto& e : report.entries) {
        const char* status = e.status == ValidationReport::Status::Pass    ? "pass"
                             : e.status == ValidationReport::Status::Fail ? "fail"
                                                                          : "skipped";
        entries.push_back({{"name", e.name}, {"status", status}, {"detail", e.detail}});
    }
    j["checks"] = entries;
    return j;
}

json joint_to_json(const JointDistribution& joint) {
    json j;
    j["format"] = "qsr-joint";
    j["code_id"] = joint.code_id;
    j["p"] = format_g17(joint.p);
    j["k"] = joint.k;
    j["syndrome_bits"] = joint.syndrome_bits;
    j["method"] = joint.method;
    json entries = json::array();
    for (size_t i = 0; i < joint.keys.size(); ++i) {
        Syndrome s = Syndrome::from_packed(joint.keys[i], joint.syndrome_bits);
        entries.push_back({{"s", s.hex()},
                           {"p_i", format_g17(joint.probs[i][0])},
                           {"p_x", format_g17(joint.probs[i][1])}});
    }
    j["entries"] = entries;
    return j;
}

JointDistribution joint_from_json(const json& j) {
    try {
        if (j.at("format").get<std::string>() != "qsr-joint")
            throw ParseError("not a joint-distribution file");
        JointDistribution joint;
        joint.code_id = j.at("code_id").get<std::string>();
        joint.p = parse_g17(j.at("p").get<std::string>());
        joint.k = j.at("k").get<int>();
        joint.syndrome_bits = j.at("syndrome_bits").get<int>();
        joint.method = j.at("method").get<std::string>();
        for (const auto& e : j.at("entries")) {
            Syndrome s = Syndrome::from_hex(e.at("s").get<std::string>(), joint.syndrome_bits);
            uint32_t id = static_cast<uint32_t>(joint.keys.size());
            joint.keys.push_back(s.packed_key());
            joint.index.emplace(joint.keys.back(), id);
            joint.probs.push_back({parse_g17(e.at("p_i").get<std::string>()),
                                   parse_g17(e.at("p_x").get<std::string>())});
        }
        return joint;
    } catch (const json::exception& e) {
        throw ParseError(std::string("joint file: ") + e.what());
    }
}

void write_joint(const std::string& path, const JointDistribution& joint) {
    auto out = open_out(path);
    out << joint_to_json(joint).dump() << '\n';
}

JointDistribution read_joint(const std::string& path) {
    auto in = open_in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return joint_from_json(parse_json(ss.str(), path));
}

SampleBatch ingest_records(std::istream& in, int syndrome_bits) {
    SampleBatch batch;
    batch.code_id = "external";
    std::string line;
    uint64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json rec = parse_json(line, "line " + std::to_string(lineno));
        try {
            std::string hex = rec.at("s").get<std::string>();
            if (syndrome_bits == 0) syndrome_bits = static_cast<int>(hex.size()) * 4;
            if (static_cast<int>(hex.size()) != 2 * ((syndrome_bits + 7) / 8))
                throw ParseError("syndrome width differs from earlier records");
            SampleRecord r;
            r.key_id = batch.intern(Syndrome::from_hex(hex, syndrome_bits).packed_key());
            int x = rec.at("x").get<int>();
            if (x != 0 && x != 1) throw ParseError("x must be 0 or 1");
            r.x = static_cast<uint8_t>(x);
            if (rec.contains("gap") && !rec.at("gap").is_null())
                r.gap = rec.at("gap").get<int16_t>();
            batch.records.push_back(r);
        } catch (const json::exception& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (batch.records.empty()) throw EmptyInputError("no records to ingest");
    batch.syndrome_bits = syndrome_bits;
    batch.finalize_counts();
    return batch;
}

SampleBatch ingest_records(const std::string& path, int syndrome_bits) {
    auto in = open_in(path);
    return ingest_records(in, syndrome_bits);
}

}  // namespace qsr
