#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qsr/analysis.hpp"
#include "qsr/code.hpp"
#include "qsr/decoders.hpp"
#include "qsr/errors.hpp"
#include "qsr/exact_dist.hpp"
#include "qsr/experiment.hpp"
#include "qsr/io.hpp"
#include "qsr/postselect.hpp"
#include "qsr/resampling.hpp"
#include "qsr/simulate.hpp"
#include "qsr/trellis.hpp"

using nlohmann::json;

namespace {

struct CodeArgs {
    int distance = 3;
    std::string layout = "rotated";
    std::string code_file;
};

void add_code_args(CLI::App* cmd, CodeArgs& args) {
    cmd->add_option("-d,--distance", args.distance, "code distance");
    cmd->add_option("-l,--layout", args.layout, "rotated | unrotated");
    cmd->add_option("--code", args.code_file, "read the code from a JSON file instead");
}

qsr::CodeSpec resolve_code(const CodeArgs& args) {
    if (!args.code_file.empty()) return qsr::read_code(args.code_file);
    qsr::Layout layout = qsr::layout_from_name(args.layout);
    return layout == qsr::Layout::Rotated ? qsr::build_rotated(args.distance)
                                          : qsr::build_unrotated(args.distance);
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw qsr::ResourceError("cannot open '" + out_path + "' for writing");
    out << j.dump(2) << '\n';
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qsr::ResourceError("cannot open '" + path + "' for reading");
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) throw qsr::EmptyInputError(path + " is empty");
    return rows;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surface-code sampling and syndrome-resampling toolkit"};
    app.require_subcommand(1);

    CodeArgs code_args;
    double p = 0.1;
    double alpha_f = 1.0;
    int alpha_i = 1;
    uint64_t samples = 10000;
    uint64_t seed = 0;
    uint64_t n_tilde = 0;
    std::string out_path, in_path, syndrome_hex, decoder = "mwpm", method = "trellis";
    std::string mode = "ps";
    double cut = 1.0;
    int bits = 0;
    bool with_gap = false, with_prob = false, raw_eq2 = false;
    int replicates = 200;
    double level = 0.67;

    auto* codegen = app.add_subcommand("codegen", "build a surface code and write it as JSON");
    add_code_args(codegen, code_args);
    codegen->add_option("-o,--out", out_path, "output file (default stdout)");

    auto* validate = app.add_subcommand("validate", "check every code invariant");
    add_code_args(validate, code_args);
    validate->add_option("-o,--out", out_path);

    auto* simulate = app.add_subcommand("simulate", "run a seeded Monte Carlo batch");
    add_code_args(simulate, code_args);
    simulate->add_option("-p", p, "per-qubit flip probability")->required();
    simulate->add_option("-n,--samples", samples);
    simulate->add_option("--decoder", decoder, "mwpm | mld");
    simulate->add_flag("--gap", with_gap, "record the complementary gap");
    simulate->add_flag("--exact-prob", with_prob, "record ln P(s) per sample");
    simulate->add_option("--seed", seed);
    simulate->add_option("-o,--out", out_path, "batch file")->required();

    auto* decode = app.add_subcommand("decode", "decode a single syndrome");
    add_code_args(decode, code_args);
    decode->add_option("-s,--syndrome", syndrome_hex, "hex syndrome")->required();
    decode->add_option("--decoder", decoder, "mwpm | mld");
    decode->add_option("-p", p, "flip probability (mld only)");
    decode->add_flag("--gap", with_gap, "also report the complementary gap");
    decode->add_option("-o,--out", out_path);

    auto* exact = app.add_subcommand("exact", "exact distributions and derived quantities");
    exact->require_subcommand(1);
    auto* ex_joint = exact->add_subcommand("joint", "full joint table P(s, l)");
    add_code_args(ex_joint, code_args);
    ex_joint->add_option("-p", p)->required();
    ex_joint->add_option("--method", method, "trellis | enum");
    ex_joint->add_option("-o,--out", out_path);
    auto* ex_power = exact->add_subcommand("powerdist", "power distribution of a joint table");
    ex_power->add_option("--joint", in_path, "joint table file")->required();
    ex_power->add_option("-a,--alpha", alpha_f)->required();
    ex_power->add_option("-o,--out", out_path);
    auto* ex_rci = exact->add_subcommand("rci", "Renyi coherent information");
    add_code_args(ex_rci, code_args);
    ex_rci->add_option("-p", p)->required();
    ex_rci->add_option("-a,--alpha", alpha_f)->required();
    ex_rci->add_option("--method", method, "trellis | enum | stream");
    ex_rci->add_flag("--raw-eq2", raw_eq2, "drop the +k shift");
    ex_rci->add_option("-o,--out", out_path);
    auto* ex_fail = exact->add_subcommand("failure", "infinite-sample resampled failure rate");
    ex_fail->add_option("--joint", in_path, "joint table file")->required();
    ex_fail->add_option("-a,--alpha", alpha_f)->required();
    ex_fail->add_option("-o,--out", out_path);

    auto* resample = app.add_subcommand("resample", "syndrome-resampling estimate from a batch");
    resample->add_option("-b,--batch", in_path, "batch file")->required();
    resample->add_option("-a,--alpha", alpha_i)->required();
    resample->add_option("--n-tilde", n_tilde, "resample size (0 = kept count)");
    resample->add_option("--seed", seed);
    resample->add_option("--estimator", method, "empirical | exact")->default_val("empirical");
    resample->add_option("-o,--out", out_path);

    auto* postselect = app.add_subcommand("postselect", "post-selected estimates from a batch");
    postselect->add_option("-b,--batch", in_path, "batch file")->required();
    postselect->add_option("--mode", mode, "ps | cgps | combined")->required();
    postselect->add_option("-c", cut, "confidence cut (cgps, combined)");
    postselect->add_option("-d,--distance", code_args.distance, "code distance for the gap scale");
    postselect->add_option("-a,--alpha", alpha_i, "resampling alpha (combined)");
    postselect->add_option("--n-tilde", n_tilde);
    postselect->add_option("--seed", seed);
    postselect->add_option("-o,--out", out_path);

    auto* collapse = app.add_subcommand("collapse", "finite-size scaling collapse of a CSV");
    collapse->add_option("-i,--in", in_path, "CSV with columns p,d,p_l,sigma")->required();
    collapse->add_option("--seed", seed);
    collapse->add_option("-o,--out", out_path);

    auto* crossing = app.add_subcommand("crossing", "crossing point of two curves on one grid");
    std::string curve_a, curve_b;
    crossing->add_option("--a", curve_a, "CSV with columns p,p_l")->required();
    crossing->add_option("--b", curve_b, "CSV with columns p,p_l")->required();
    crossing->add_option("-o,--out", out_path);

    auto* ingest = app.add_subcommand("ingest", "convert external JSONL records to a batch file");
    ingest->add_option("-i,--in", in_path, "JSONL records")->required();
    ingest->add_option("--bits", bits, "syndrome width (0 = infer from first record)");
    ingest->add_option("-o,--out", out_path, "batch file")->required();

    auto* run = app.add_subcommand("run", "full experiment sweep from a JSON config");
    run->add_option("--config", in_path, "experiment config")->required();
    run->add_option("--csv", out_path, "result table")->required();
    std::string manifest_path;
    run->add_option("--manifest", manifest_path, "run manifest");

    auto* bounds = app.add_subcommand("bounds", "sample-complexity bounds for a given alpha");
    add_code_args(bounds, code_args);
    bounds->add_option("-p", p)->required();
    bounds->add_option("-a,--alpha", alpha_i)->required();
    bounds->add_option("-o,--out", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (codegen->parsed()) {
            emit(qsr::code_to_json(resolve_code(code_args)), out_path);
        } else if (validate->parsed()) {
            qsr::ValidationReport report = qsr::validate_code(resolve_code(code_args));
            emit(qsr::validation_to_json(report), out_path);
            return report.all_passed() ? 0 : 1;
        } else if (simulate->parsed()) {
            qsr::CodeSpec code = resolve_code(code_args);
            qsr::DecoderConfig cfg;
            cfg.method = qsr::decoder_method_from_name(decoder);
            cfg.with_gap = with_gap;
            cfg.with_exact_prob = with_prob;
            qsr::SampleBatch batch = qsr::run_batch(code, {p}, samples, cfg, seed);
            qsr::write_batch(out_path, batch);
            uint64_t failures = 0;
            for (const auto& r : batch.records) failures += r.x;
            json summary;
            summary["n"] = batch.size();
            summary["failures"] = failures;
            summary["distinct_syndromes"] = batch.keys.size();
            std::cout << summary.dump() << '\n';
        } else if (decode->parsed()) {
            qsr::CodeSpec code = resolve_code(code_args);
            qsr::Syndrome s = qsr::Syndrome::from_hex(syndrome_hex, code.num_z_checks());
            json j;
            j["syndrome"] = s.hex();
            if (qsr::decoder_method_from_name(decoder) == qsr::DecoderConfig::Method::Mwpm) {
                qsr::DetectionGraph graph = qsr::detection_graph(code);
                qsr::MwpmDecoder dec(code, graph);
                qsr::DecodeResult r = dec.decode(s);
                j["class"] = qsr::class_name(r.cls);
                j["weight"] = r.weight;
                j["correction"] = r.correction.hex();
            } else {
                qsr::Trellis trellis(code);
                auto lp = trellis.coset_log_probs(s, p);
                j["class"] = qsr::class_name(lp[1] > lp[0] ? qsr::LogicalClass::X
                                                          : qsr::LogicalClass::I);
                j["log_p_i"] = qsr::format_g17(lp[0]);
                j["log_p_x"] = qsr::format_g17(lp[1]);
            }
            if (with_gap) {
                qsr::Trellis trellis(code);
                qsr::GapResult g = qsr::complementary_gap(trellis, s);
                j["gap"] = g.gap;
                j["w_best"] = g.w_best;
                j["w_comp"] = g.w_comp;
            }
            emit(j, out_path);
        } else if (ex_joint->parsed()) {
            qsr::CodeSpec code = resolve_code(code_args);
            qsr::JointDistribution joint = method == "enum"
                                               ? qsr::enumerate_joint(code, {p})
                                               : qsr::trellis_joint(code, {p});
            if (out_path.empty())
                std::cout << qsr::joint_to_json(joint).dump() << '\n';
            else
                qsr::write_joint(out_path, joint);
        } else if (ex_power->parsed()) {
            qsr::JointDistribution joint = qsr::read_joint(in_path);
            qsr::PowerDistribution pd = qsr::power_distribution(joint, alpha_f);
            json j;
            j["alpha"] = alpha_f;
            j["z_alpha"] = qsr::format_g17(pd.z_alpha);
            j["log_z_alpha"] = qsr::format_g17(pd.log_z_alpha);
            json entries = json::array();
            for (size_t i = 0; i < joint.keys.size(); ++i) {
                qsr::Syndrome s = qsr::Syndrome::from_packed(joint.keys[i], joint.syndrome_bits);
                entries.push_back({{"s", s.hex()}, {"q", qsr::format_g17(pd.q[i])}});
            }
            j["entries"] = entries;
            emit(j, out_path);
        } else if (ex_rci->parsed()) {
            qsr::CodeSpec code = resolve_code(code_args);
            qsr::RciValue v;
            if (method == "stream") {
                v = qsr::rci_trellis(code, {p}, alpha_f, raw_eq2);
            } else {
                qsr::JointDistribution joint = method == "enum"
                                                   ? qsr::enumerate_joint(code, {p})
                                                   : qsr::trellis_joint(code, {p});
                v = qsr::rci(joint, alpha_f, raw_eq2);
            }
            json j;
            j["alpha"] = alpha_f;
            j["bits"] = qsr::format_g17(v.bits);
            j["raw"] = raw_eq2;
            emit(j, out_path);
        } else if (ex_fail->parsed()) {
            qsr::JointDistribution joint = qsr::read_joint(in_path);
            double v = qsr::exact_resampled_failure(joint, alpha_f, qsr::mld_class_map(joint));
            json j;
            j["alpha"] = alpha_f;
            j["p_l"] = qsr::format_g17(v);
            emit(j, out_path);
        } else if (resample->parsed()) {
            qsr::SampleBatch batch = qsr::read_batch(in_path);
            qsr::Estimate est;
            if (method == "exact")
                est = qsr::sr_estimate(batch, static_cast<double>(alpha_i));
            else
                est = qsr::resample_workflow(batch, alpha_i, n_tilde, seed).estimate;
            json j = qsr::estimate_to_json(est);
            j["n_tilde"] = n_tilde;
            j["with_replacement"] = true;
            emit(j, out_path);
        } else if (postselect->parsed()) {
            qsr::SampleBatch batch = qsr::read_batch(in_path);
            qsr::Estimate est;
            if (mode == "ps") {
                est = qsr::ps_estimate(batch);
            } else if (mode == "cgps") {
                est = qsr::cgps_filter(batch, {cut, code_args.distance}).estimate;
            } else if (mode == "combined") {
                est = qsr::combined_sr_cgps(batch, alpha_i, {cut, code_args.distance}, n_tilde,
                                            seed);
            } else {
                throw qsr::DomainError("unknown mode '" + mode + "'");
            }
            emit(qsr::estimate_to_json(est), out_path);
        } else if (collapse->parsed()) {
            auto rows = read_csv(in_path);
            std::vector<qsr::ScalingPoint> points;
            for (size_t i = rows[0][0] == "p" ? 1 : 0; i < rows.size(); ++i) {
                if (rows[i].size() != 4)
                    throw qsr::ParseError("row " + std::to_string(i + 1) +
                                          ": expected p,d,p_l,sigma");
                points.push_back({qsr::parse_g17(rows[i][0]), std::stoi(rows[i][1]),
                                  qsr::parse_g17(rows[i][2]), qsr::parse_g17(rows[i][3])});
            }
            emit(qsr::fit_to_json(qsr::scaling_collapse(points, seed)), out_path);
        } else if (crossing->parsed()) {
            auto load_curve = [&](const std::string& path) {
                qsr::CurveSamples c;
                auto rows = read_csv(path);
                for (size_t i = rows[0][0] == "p" ? 1 : 0; i < rows.size(); ++i) {
                    if (rows[i].size() != 2)
                        throw qsr::ParseError(path + " row " + std::to_string(i + 1) +
                                              ": expected p,p_l");
                    c.p.push_back(qsr::parse_g17(rows[i][0]));
                    c.p_l.push_back(qsr::parse_g17(rows[i][1]));
                }
                return c;
            };
            qsr::CurveSamples a = load_curve(curve_a);
            qsr::CurveSamples b = load_curve(curve_b);
            json j;
            j["p_cross"] = qsr::format_g17(qsr::crossing_point(a, b));
            emit(j, out_path);
        } else if (ingest->parsed()) {
            qsr::SampleBatch batch = qsr::ingest_records(in_path, bits);
            qsr::write_batch(out_path, batch);
            json j;
            j["n"] = batch.size();
            j["syndrome_bits"] = batch.syndrome_bits;
            j["distinct_syndromes"] = batch.keys.size();
            std::cout << j.dump() << '\n';
        } else if (run->parsed()) {
            qsr::ExperimentConfig cfg = qsr::read_experiment_config(in_path);
            qsr::ExperimentResult result = qsr::run_experiment(cfg);
            std::ofstream csv(out_path);
            if (!csv) throw qsr::ResourceError("cannot open '" + out_path + "' for writing");
            qsr::write_experiment_csv(csv, result);
            if (!manifest_path.empty()) emit(result.manifest, manifest_path);
            std::cout << result.manifest.dump() << '\n';
        } else if (bounds->parsed()) {
            qsr::CodeSpec code = resolve_code(code_args);
            emit(qsr::bounds_to_json(qsr::sample_bounds(alpha_i, code, {p})), out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
