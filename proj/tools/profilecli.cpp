// Command-line front end: generate synthetic streams, estimate profiles
// from stream files, compute exact profiles, and run evaluation campaigns.
//
// Stream files are newline-delimited decimal 64-bit ids; lines starting
// with '#' are comments. Exit codes: 0 success, 1 usage error, 2 data
// error, 3 internal invariant violation.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>

#include "CLI11.hpp"
#include "json.hpp"

#include "profsketch/distinct.hpp"
#include "profsketch/estimator.hpp"
#include "profsketch/harness.hpp"
#include "profsketch/invert.hpp"
#include "profsketch/sketch.hpp"
#include "profsketch/symfuncs.hpp"

using json = nlohmann::ordered_json;
using namespace profsketch;

namespace {

constexpr std::string_view kStreamHeader = "#profile-stream v1";

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t token_to_id(std::string_view token) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : token) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return hash_u64(HashSeed{0x70726f66696c6531ULL}, h);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

// Streams ids from a file through `sink`; returns the number of data lines.
template <typename Sink>
std::uint64_t for_each_stream_id(const std::string& path, bool hash_tokens, Sink&& sink) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open stream file: " + path);
    std::string line;
    std::uint64_t line_no = 0, count = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        std::uint64_t id = 0;
        if (hash_tokens) {
            id = token_to_id(body);
        } else {
            const auto res = std::from_chars(body.data(), body.data() + body.size(), id);
            if (res.ec != std::errc() || res.ptr != body.data() + body.size())
                throw DataError("line " + std::to_string(line_no) + ": not a 64-bit unsigned id");
        }
        sink(id);
        ++count;
    }
    return count;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

json profile_to_json(const EstimatedProfile& est) {
    json obj = json::object();
    for (std::uint32_t i = 1; i <= est.tau; ++i) obj[std::to_string(i)] = est.at(i);
    return obj;
}

json estimate_report(const EstimatedProfile& est, double epsilon, std::uint64_t m) {
    json report;
    report["version"] = 1;
    report["error_type"] = est.error_type == ErrorType::D ? "D" : "m";
    report["epsilon"] = epsilon;
    report["tau"] = est.tau;
    report["profile"] = profile_to_json(est);
    report["D_hat"] = est.d_hat;
    report["S_hat"] = est.s_hat;
    report["m"] = m;
    report["warnings"] = est.warnings;
    return report;
}

void write_output(const json& doc, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file: " + path);
    out << doc.dump(2) << "\n";
}

Profile profile_from_json(const json& obj) {
    Profile profile;
    for (const auto& [key, value] : obj.items()) {
        std::uint64_t freq = 0;
        const auto res = std::from_chars(key.data(), key.data() + key.size(), freq);
        if (res.ec != std::errc() || freq == 0)
            throw DataError("profile spec: keys must be positive integers");
        profile[freq] = value.get<std::uint64_t>();
    }
    return profile;
}

StreamSpec stream_spec_from_json(const json& doc) {
    StreamSpec spec;
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "profile") {
        spec.kind = StreamSpec::Kind::ProfileTargeted;
        spec.target_profile = profile_from_json(doc.at("profile"));
        spec.shuffle = doc.value("shuffle", true);
    } else if (kind == "zipf") {
        spec.kind = StreamSpec::Kind::Zipf;
        spec.zipf_alpha = doc.at("alpha").get<double>();
        spec.support = doc.at("support").get<std::uint64_t>();
        spec.length = doc.at("m").get<std::uint64_t>();
    } else if (kind == "uniform") {
        spec.kind = StreamSpec::Kind::Uniform;
        spec.support = doc.at("support").get<std::uint64_t>();
        spec.length = doc.at("m").get<std::uint64_t>();
    } else {
        throw DataError("unknown stream kind: " + kind);
    }
    return spec;
}

int cmd_generate(const std::string& kind, const std::string& spec_json, double alpha,
                 std::uint64_t support, std::uint64_t m, std::uint64_t seed, bool no_shuffle,
                 const std::string& out_path) {
    StreamSpec spec;
    if (kind == "profile") {
        if (spec_json.empty()) throw CLI::ValidationError("--spec is required for --kind profile");
        spec.kind = StreamSpec::Kind::ProfileTargeted;
        spec.target_profile = profile_from_json(json::parse(spec_json));
        spec.shuffle = !no_shuffle;
    } else if (kind == "zipf") {
        spec.kind = StreamSpec::Kind::Zipf;
        spec.zipf_alpha = alpha;
        spec.support = support;
        spec.length = m;
    } else {
        spec.kind = StreamSpec::Kind::Uniform;
        spec.support = support;
        spec.length = m;
    }
    spec.seed = seed;

    const auto stream = generate_stream(spec);
    std::ofstream out(out_path);
    if (!out) throw DataError("cannot open output file: " + out_path);
    out << kStreamHeader << "\n";
    for (std::uint64_t id : stream) out << id << "\n";
    return 0;
}

int cmd_estimate(const std::string& in_path, double epsilon, const std::string& error_type,
                 std::uint32_t tau, std::uint64_t seed, const std::string& algo,
                 bool hash_tokens, const std::string& json_out) {
    const HashSeed base{seed};
    EstimatedProfile est;
    std::uint64_t m = 0;

    if (algo == "sketch") {
        const ErrorType et = error_type == "D" ? ErrorType::D : ErrorType::M;
        ProfileSketch sketch(SketchConfig::defaults(epsilon, et, base, tau));
        m = for_each_stream_id(in_path, hash_tokens, [&](std::uint64_t id) { sketch.update(id); });
        est = finalize(sketch);
    } else {
        // The baselines need the stream length up front; count first, then
        // estimate on a second streaming pass (memory stays O(sample)).
        m = for_each_stream_id(in_path, hash_tokens, [](std::uint64_t) {});
        KmvSketch kmv(KmvSketch::capacity_for(epsilon / 10.0), derive(base, 7));
        DmEstimator dm(epsilon, m, base, algo == "dm-compressed");
        for_each_stream_id(in_path, hash_tokens, [&](std::uint64_t id) {
            kmv.update(id);
            dm.update(id);
        });
        est = dm.finalize(kmv.estimate());
    }

    write_output(estimate_report(est, epsilon, m), json_out);
    return 0;
}

int cmd_exact(const std::string& in_path, bool hash_tokens, const std::string& json_out) {
    std::vector<std::uint64_t> stream;
    for_each_stream_id(in_path, hash_tokens, [&](std::uint64_t id) { stream.push_back(id); });
    const Profile profile = exact_profile(stream);

    std::uint64_t distinct = 0, mass = 0;
    json prof = json::object();
    for (const auto& [freq, count] : profile) {
        prof[std::to_string(freq)] = count;
        distinct += count;
        mass += freq * count;
    }
    json report;
    report["version"] = 1;
    report["m"] = mass;
    report["D"] = distinct;
    report["profile"] = prof;
    write_output(report, json_out);
    return 0;
}

int cmd_evaluate(const std::string& spec_path, std::size_t trials, double epsilon,
                 const std::string& error_type, std::uint32_t tau, const std::string& algo,
                 std::uint64_t seed, std::uint32_t threads, const std::string& csv_out,
                 const std::string& json_out) {
    std::ifstream spec_in(spec_path);
    if (!spec_in) throw DataError("cannot open spec file: " + spec_path);
    json spec_doc;
    try {
        spec_in >> spec_doc;
    } catch (const json::exception& e) {
        throw DataError(std::string("spec file: ") + e.what());
    }
    const StreamSpec spec = stream_spec_from_json(spec_doc);

    TrialConfig cfg;
    cfg.algo = algo == "sketch"          ? TrialConfig::Algo::Sketch
               : algo == "dm"            ? TrialConfig::Algo::Dm
                                         : TrialConfig::Algo::DmCompressed;
    cfg.epsilon = epsilon;
    cfg.error_type = error_type == "D" ? ErrorType::D : ErrorType::M;
    cfg.tau = tau;
    cfg.seed = HashSeed{seed};
    cfg.threads = threads;

    const TrialRun run = run_trials(spec, cfg, trials);

    if (!csv_out.empty()) {
        std::ofstream csv(csv_out);
        if (!csv) throw DataError("cannot open output file: " + csv_out);
        csv << "seed,head_l1,full_l1,D,m,D_hat,S_hat,head_pass,full_pass,wall_ms\n";
        for (const auto& r : run.reports) {
            csv << r.seed << ',' << format_double(r.head_l1) << ',' << format_double(r.full_l1)
                << ',' << format_double(r.distinct) << ',' << format_double(r.mass) << ','
                << format_double(r.d_hat) << ',' << format_double(r.s_hat) << ','
                << (r.head_pass ? 1 : 0) << ',' << (r.full_pass ? 1 : 0) << ','
                << format_double(r.wall_ms) << "\n";
        }
    }

    json summary;
    summary["version"] = 1;
    summary["algo"] = algo;
    summary["epsilon"] = epsilon;
    summary["error_type"] = error_type;
    summary["tau"] = tau;
    summary["trials"] = run.summary.trials;
    json rates;
    rates["head_pass_rate"] = run.summary.head_pass_rate;
    rates["head_pass_stderr"] = run.summary.head_pass_stderr;
    rates["full_pass_rate"] = run.summary.full_pass_rate;
    rates["full_pass_stderr"] = run.summary.full_pass_stderr;
    summary["pass"] = rates;
    json quantiles;
    quantiles["head_l1_median"] = run.summary.head_l1_median;
    quantiles["head_l1_p90"] = run.summary.head_l1_p90;
    quantiles["full_l1_median"] = run.summary.full_l1_median;
    quantiles["full_l1_p90"] = run.summary.full_l1_p90;
    summary["error_quantiles"] = quantiles;
    write_output(summary, json_out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"profile (frequency-of-frequencies) estimation over streams"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write a synthetic stream file");
    std::string gen_kind, gen_spec, gen_out;
    double gen_alpha = 1.0;
    std::uint64_t gen_support = 0, gen_m = 0, gen_seed = 0;
    bool gen_no_shuffle = false;
    gen->add_option("--kind", gen_kind, "profile | zipf | uniform")
        ->required()
        ->check(CLI::IsMember({"profile", "zipf", "uniform"}));
    gen->add_option("--spec", gen_spec, "JSON map frequency->count (profile kind)");
    gen->add_option("--alpha", gen_alpha, "zipf exponent");
    gen->add_option("--support", gen_support, "support size (zipf/uniform)");
    gen->add_option("--m", gen_m, "stream length (zipf/uniform)");
    gen->add_option("--seed", gen_seed, "generation seed")->required();
    gen->add_flag("--no-shuffle", gen_no_shuffle, "keep profile-kind streams unshuffled");
    gen->add_option("--out", gen_out, "output stream file")->required();

    // estimate
    auto* est = app.add_subcommand("estimate", "estimate the profile of a stream file");
    std::string est_in, est_error_type = "D", est_algo = "sketch", est_json;
    double est_epsilon = 0.1;
    std::uint32_t est_tau = 3;
    std::uint64_t est_seed = 0;
    bool est_hash_tokens = false;
    est->add_option("--in", est_in, "input stream file")->required();
    est->add_option("--epsilon", est_epsilon, "error parameter")->required();
    est->add_option("--error-type", est_error_type, "D | m")->check(CLI::IsMember({"D", "m"}));
    est->add_option("--tau", est_tau, "frequency threshold (error type D)");
    est->add_option("--seed", est_seed, "estimator seed")->required();
    est->add_option("--algo", est_algo, "sketch | dm | dm-compressed")
        ->check(CLI::IsMember({"sketch", "dm", "dm-compressed"}));
    est->add_flag("--hash-tokens", est_hash_tokens, "treat lines as arbitrary tokens, hash to ids");
    est->add_option("--json-out", est_json, "report file ('-' for stdout)");

    // exact
    auto* exact = app.add_subcommand("exact", "compute the exact profile of a stream file");
    std::string exact_in, exact_json;
    bool exact_hash_tokens = false;
    exact->add_option("--in", exact_in, "input stream file")->required();
    exact->add_flag("--hash-tokens", exact_hash_tokens, "treat lines as arbitrary tokens");
    exact->add_option("--json-out", exact_json, "report file ('-' for stdout)");

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "run a seeded evaluation campaign");
    std::string eval_spec, eval_error_type = "D", eval_algo = "sketch", eval_csv, eval_json;
    std::size_t eval_trials = 50;
    double eval_epsilon = 0.1;
    std::uint32_t eval_tau = 3, eval_threads = 1;
    std::uint64_t eval_seed = 0;
    eval->add_option("--spec-file", eval_spec, "stream spec JSON file")->required();
    eval->add_option("--trials", eval_trials, "number of seeded trials");
    eval->add_option("--epsilon", eval_epsilon, "error parameter")->required();
    eval->add_option("--error-type", eval_error_type, "D | m")->check(CLI::IsMember({"D", "m"}));
    eval->add_option("--tau", eval_tau, "head-metric width / type-D threshold");
    eval->add_option("--algo", eval_algo, "sketch | dm | dm-compressed")
        ->check(CLI::IsMember({"sketch", "dm", "dm-compressed"}));
    eval->add_option("--seed", eval_seed, "campaign base seed")->required();
    eval->add_option("--threads", eval_threads, "worker threads");
    eval->add_option("--csv-out", eval_csv, "per-trial CSV file");
    eval->add_option("--json-out", eval_json, "summary JSON file ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed())
            return cmd_generate(gen_kind, gen_spec, gen_alpha, gen_support, gen_m, gen_seed,
                                gen_no_shuffle, gen_out);
        if (est->parsed())
            return cmd_estimate(est_in, est_epsilon, est_error_type, est_tau, est_seed, est_algo,
                                est_hash_tokens, est_json);
        if (exact->parsed()) return cmd_exact(exact_in, exact_hash_tokens, exact_json);
        if (eval->parsed())
            return cmd_evaluate(eval_spec, eval_trials, eval_epsilon, eval_error_type, eval_tau,
                                eval_algo, eval_seed, eval_threads, eval_csv, eval_json);
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
