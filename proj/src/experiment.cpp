#include "qsr/experiment.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include "qsr/errors.hpp"
#include "qsr/io.hpp"
#include "qsr/postselect.hpp"
#include "qsr/rng.hpp"
#include "qsr/simulate.hpp"

namespace qsr {

using nlohmann::json;

ExperimentConfig experiment_from_json(const json& j) {
    try {
        ExperimentConfig cfg;
        cfg.layout = layout_from_name(j.value("layout", std::string("rotated")));
        cfg.distances = j.at("distances").get<std::vector<int>>();
        cfg.ps = j.at("ps").get<std::vector<double>>();
        cfg.methods = j.at("methods").get<std::vector<std::string>>();
        cfg.alphas = j.value("alphas", std::vector<int>{1});
        cfg.cuts = j.value("cuts", std::vector<double>{});
        cfg.samples = j.at("samples").get<uint64_t>();
        cfg.seed = j.value("seed", uint64_t{0});
        return cfg;
    } catch (const json::exception& e) {
        throw ParseError(std::string("experiment config: ") + e.what());
    }
}

ExperimentConfig read_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot open '" + path + "' for reading");
    std::stringstream ss;
    ss << in.rdbuf();
    json j = json::parse(ss.str(), nullptr, false);
    if (j.is_discarded()) throw ParseError(path + ": invalid JSON");
    return experiment_from_json(j);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (cfg.distances.empty() || cfg.ps.empty() || cfg.methods.empty())
        throw DomainError("experiment needs at least one distance, flip rate and method");
    if (cfg.samples < 1) throw DomainError("experiment needs samples >= 1");
    for (const auto& m : cfg.methods) decoder_method_from_name(m);

    ExperimentResult result;
    uint64_t batch_idx = 0;
    for (int d : cfg.distances) {
        CodeSpec code = cfg.layout == Layout::Rotated ? build_rotated(d) : build_unrotated(d);
        for (double p : cfg.ps) {
            for (const auto& method : cfg.methods) {
                DecoderConfig dec;
                dec.method = decoder_method_from_name(method);
                dec.with_gap = !cfg.cuts.empty();
                uint64_t batch_seed = derive_seed(cfg.seed, batch_idx++);
                SampleBatch batch = run_batch(code, {p}, cfg.samples, dec, batch_seed);
                for (int alpha : cfg.alphas) {
                    uint64_t row_seed = derive_seed(batch_seed, static_cast<uint64_t>(alpha));
                    ExperimentRow row;
                    row.d = d;
                    row.p = p;
                    row.method = method;
                    row.alpha = alpha;
                    row.n = cfg.samples;
                    try {
                        row.estimate = resample_workflow(batch, alpha, 0, row_seed).estimate;
                    } catch (const EmptyInputError&) {
                        continue;  // no syndrome reached count alpha at this point
                    }
                    result.rows.push_back(row);
                    for (double c : cfg.cuts) {
                        ExperimentRow cut_row = row;
                        cut_row.c = c;
                        try {
                            cut_row.estimate =
                                combined_sr_cgps(batch, alpha, {c, d}, 0, row_seed);
                        } catch (const EmptyInputError&) {
                            continue;
                        }
                        result.rows.push_back(cut_row);
                    }
                }
            }
        }
    }

    json manifest;
    manifest["format"] = "qsr-experiment";
    manifest["layout"] = layout_name(cfg.layout);
    manifest["distances"] = cfg.distances;
    manifest["ps"] = cfg.ps;
    manifest["methods"] = cfg.methods;
    manifest["alphas"] = cfg.alphas;
    manifest["cuts"] = cfg.cuts;
    manifest["samples"] = cfg.samples;
    manifest["seed"] = cfg.seed;
    manifest["rows"] = result.rows.size();
    result.manifest = manifest;
    return result;
}

void write_experiment_csv(std::ostream& out, const ExperimentResult& result) {
    out << "d,p,method,alpha,c,p_l,std_err,acceptance,n,n_effective\n";
    for (const auto& r : result.rows) {
        out << r.d << ',' << format_g17(r.p) << ',' << r.method << ',' << r.alpha << ','
            << (std::isnan(r.c) ? std::string() : format_g17(r.c)) << ','
            << format_g17(r.estimate.p_l) << ',' << format_g17(r.estimate.std_err) << ','
            << format_g17(r.estimate.acceptance) << ',' << r.n << ',' << r.estimate.effective_n
            << '\n';
    }
}

}  // namespace qsr
