/*
   Copyright 2026 The Carve Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "carve/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "carve/byte_source.hpp"
#include "carve/carver.hpp"
#include "carve/corpus.hpp"
#include "carve/digest.hpp"
#include "carve/error.hpp"
#include "carve/file_util.hpp"
#include "carve/scanner.hpp"
#include "carve/signature.hpp"

namespace fs = std::filesystem;

namespace carve::cli {

namespace {

class UsageError : public Error {
  public:
    using Error::Error;
};

struct NamedSet {
    SignatureSet set;
    std::string identity;
};

NamedSet resolve_signatures(const std::string& which) {
    if (which == "paper") return {builtin_paper_set(), "paper"};
    if (which == "canonical") return {builtin_canonical_set(), "canonical"};
    return {load_signatures(read_text_file(which)), which};
}

Backend backend_or_throw(const std::string& name) {
    auto b = parse_backend(name);
    if (!b) throw UsageError("unknown algorithm '" + name + "' (expected brute, kmp, bm or ac)");
    return *b;
}

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

// ---------------------------------------------------------------------------

struct CarveFlags {
    std::string image;
    std::string signatures = "paper";
    std::string algorithm = "ac";
    std::size_t threads = default_workers();
    std::uint64_t chunk_size = kDefaultChunkSize;
    std::string output_dir = "carved";
    std::string manifest;
    bool extract_failed = false;
    bool force = false;
};

int cmd_carve(const CarveFlags& f, std::ostream& out) {
    const auto sigs = resolve_signatures(f.signatures);
    ScanOptions opts{backend_or_throw(f.algorithm), f.threads, f.chunk_size};
    if (opts.workers == 0) throw UsageError("--threads must be at least 1");
    // Validates chunk size against the signature set before any I/O.
    plan_chunks(0, opts.chunk_size, sigs.set.max_component_length());

    const fs::path manifest_path = f.manifest.empty() ? fs::path(f.output_dir) / "manifest.jsonl" : fs::path(f.manifest);
    if (fs::exists(manifest_path) && !f.force)
        throw UsageError("manifest " + manifest_path.string() + " exists; pass --force to overwrite");

    const auto image = open_image(f.image);
    const auto matches = scan(*image, sigs.set, opts);
    auto regions = pair_matches(matches, sigs.set, image->length());
    for (auto& r : regions) r = validate_region(std::move(r), *image, sigs.set);

    auto manifest = extract(std::move(regions), *image, sigs.set, f.output_dir, {f.extract_failed});
    manifest.image = {f.image, image->length(), sha256_hex(*image)};
    manifest.signature_set = sigs.identity;
    write_file(manifest_path, format_manifest(manifest));

    const auto extracted = std::count_if(manifest.entries.begin(), manifest.entries.end(),
                                         [](const ManifestEntry& e) { return e.output_file.has_value(); });
    out << "regions=" << manifest.entries.size() << " extracted=" << extracted << " manifest=" << manifest_path.string()
        << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct BenchFlags {
    std::string image;
    std::string signatures = "paper";
    std::vector<std::string> algorithms{"ac", "bm"};
    std::vector<std::size_t> threads{1};
    std::vector<std::uint64_t> chunk_sizes{kDefaultChunkSize};
    std::size_t repeat = 3;
    std::string out = "bench.jsonl";
    bool force = false;
};

struct BenchRow {
    Backend backend;
    std::size_t workers;
    std::uint64_t chunk_size;
    double seconds;
    std::size_t matches;
    std::size_t regions;
};

int cmd_bench(const BenchFlags& f, std::ostream& out) {
    const auto sigs = resolve_signatures(f.signatures);
    if (f.repeat == 0) throw UsageError("--repeat must be at least 1");
    std::vector<Backend> backends;
    for (const auto& a : f.algorithms) backends.push_back(backend_or_throw(a));
    for (auto t : f.threads)
        if (t == 0) throw UsageError("--threads entries must be at least 1");
    for (auto c : f.chunk_sizes) plan_chunks(0, c, sigs.set.max_component_length());
    if (fs::exists(f.out) && !f.force) throw UsageError("report " + f.out + " exists; pass --force to overwrite");

    const auto image = open_image(f.image);
    std::size_t patterns = 0;
    for (const auto& s : sigs.set.signatures()) patterns += s.footer ? 2 : 1;

    std::optional<std::string> reference;
    std::vector<BenchRow> rows;
    for (auto backend : backends) {
        for (auto workers : f.threads) {
            for (auto chunk : f.chunk_sizes) {
                std::vector<double> times;
                MatchSet matches;
                std::size_t region_count = 0;
                for (std::size_t rep = 0; rep < f.repeat; ++rep) {
                    const auto t0 = std::chrono::steady_clock::now();
                    matches = scan(*image, sigs.set, {backend, workers, chunk});
                    region_count = pair_matches(matches, sigs.set, image->length()).size();
                    const auto t1 = std::chrono::steady_clock::now();
                    times.push_back(std::chrono::duration<double>(t1 - t0).count());
                }
                auto serialized = serialize(matches);
                if (!reference) {
                    reference = std::move(serialized);
                } else if (serialized != *reference) {
                    throw InvariantError("match set of " + std::string(to_string(backend)) + " workers=" +
                                         std::to_string(workers) + " chunk=" + std::to_string(chunk) +
                                         " differs from the first configuration");
                }
                std::sort(times.begin(), times.end());
                rows.push_back({backend, workers, chunk, times[times.size() / 2], matches.events.size(), region_count});
            }
        }
    }

    std::string report;
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["backend"] = to_string(r.backend);
        j["workers"] = r.workers;
        j["chunk_size"] = r.chunk_size;
        j["signature_count"] = sigs.set.size();
        j["pattern_count"] = patterns;
        j["bytes"] = image->length();
        j["seconds"] = r.seconds;
        j["throughput_mb_s"] = r.seconds > 0 ? static_cast<double>(image->length()) / 1e6 / r.seconds : 0.0;
        j["match_count"] = r.matches;
        j["region_count"] = r.regions;
        report += j.dump() + "\n";
        out << to_string(r.backend) << " workers=" << r.workers << " chunk=" << r.chunk_size
            << " seconds=" << r.seconds << " MB/s=" << fixed3(j["throughput_mb_s"].get<double>())
            << " matches=" << r.matches << '\n';
    }
    for (const auto& a : rows) {
        if (a.backend != Backend::ac) continue;
        for (const auto& b : rows) {
            if (b.backend == Backend::bm && b.workers == a.workers && b.chunk_size == a.chunk_size && b.seconds > 0)
                out << "ac/bm wall-clock ratio workers=" << a.workers << " chunk=" << a.chunk_size << ": "
                    << fixed3(a.seconds / b.seconds) << '\n';
        }
    }
    write_file(f.out, report);
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct GenFlags {
    std::string out;
    std::string truth;
    std::uint64_t size = 0;
    std::size_t files = 0;
    std::uint64_t seed = 0;
    std::string signatures = "canonical";
    std::vector<std::string> types;
    std::uint64_t min_file_size = 256;
    std::uint64_t max_file_size = 65536;
    bool adversarial = false;
};

int cmd_gen(const GenFlags& f, std::ostream& out) {
    auto sigs = resolve_signatures(f.signatures);
    const SignatureSet set = f.types.empty() ? sigs.set : sigs.set.select(f.types);
    GenerateOptions opts;
    opts.file_count = f.files;
    opts.image_length = f.size;
    opts.seed = f.seed;
    opts.min_file_size = f.min_file_size;
    opts.max_file_size = f.max_file_size;
    opts.adversarial = f.adversarial;
    const auto generated = generate_image(set, opts);
    write_file(f.out, ByteView(generated.image));
    write_file(f.truth, format_truth(generated.truth));
    out << "image=" << f.out << " bytes=" << generated.image.size() << " files=" << generated.truth.planted.size()
        << " sha256=" << generated.truth.image_sha256 << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvalFlags {
    std::string truth;
    std::string manifest;
};

int cmd_eval(const EvalFlags& f, std::ostream& out) {
    const auto truth = parse_truth(read_text_file(f.truth));
    const auto manifest = parse_manifest(read_text_file(f.manifest));
    const auto r = evaluate(truth, manifest);
    out << "precision=" << fixed3(r.precision) << " recall=" << fixed3(r.recall) << " exact=" << r.exact
        << " partial=" << r.partial << " carved=" << r.carved << " planted=" << r.planted << '\n';
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Signature-based file carver for raw disk images"};
    app.name("carve");
    app.require_subcommand(1);

    CarveFlags carve_flags;
    auto* carve = app.add_subcommand("carve", "Scan an image, pair headers with footers and extract files");
    carve->add_option("--image", carve_flags.image, "Raw image to carve")->required();
    carve->add_option("--signatures", carve_flags.signatures, "paper, canonical or a signature config path");
    carve->add_option("--algorithm", carve_flags.algorithm, "brute, kmp, bm or ac");
    carve->add_option("--threads", carve_flags.threads, "Worker count");
    carve->add_option("--chunk-size", carve_flags.chunk_size, "Bytes per work unit");
    carve->add_option("--output-dir", carve_flags.output_dir, "Directory for carved files");
    carve->add_option("--manifest", carve_flags.manifest, "Manifest path (default <output-dir>/manifest.jsonl)");
    carve->add_flag("--extract-failed", carve_flags.extract_failed, "Also extract regions that failed validation");
    carve->add_flag("--force", carve_flags.force, "Overwrite an existing manifest");

    BenchFlags bench_flags;
    auto* bench = app.add_subcommand("bench", "Time scan + pair across backends, workers and chunk sizes");
    bench->add_option("--image", bench_flags.image, "Raw image to scan")->required();
    bench->add_option("--signatures", bench_flags.signatures, "paper, canonical or a signature config path");
    bench->add_option("--algorithms", bench_flags.algorithms, "Comma-separated backends")->delimiter(',');
    bench->add_option("--threads", bench_flags.threads, "Comma-separated worker counts")->delimiter(',');
    bench->add_option("--chunk-sizes", bench_flags.chunk_sizes, "Comma-separated chunk sizes")->delimiter(',');
    bench->add_option("--repeat", bench_flags.repeat, "Runs per configuration; the median is reported");
    bench->add_option("--out", bench_flags.out, "Report path (JSON lines)");
    bench->add_flag("--force", bench_flags.force, "Overwrite an existing report");

    GenFlags gen_flags;
    auto* gen = app.add_subcommand("gen", "Generate a synthetic image with planted files");
    gen->add_option("--out", gen_flags.out, "Image path")->required();
    gen->add_option("--truth", gen_flags.truth, "Ground-truth path")->required();
    gen->add_option("--size", gen_flags.size, "Image length in bytes")->required();
    gen->add_option("--files", gen_flags.files, "Number of planted files");
    gen->add_option("--seed", gen_flags.seed, "Generator seed");
    gen->add_option("--signatures", gen_flags.signatures, "paper, canonical or a signature config path");
    gen->add_option("--types", gen_flags.types, "Comma-separated signature ids to plant")->delimiter(',');
    gen->add_option("--min-file-size", gen_flags.min_file_size, "Smallest planted file");
    gen->add_option("--max-file-size", gen_flags.max_file_size, "Largest planted file");
    gen->add_flag("--adversarial", gen_flags.adversarial, "Inject bare headers and footers into the filler");

    EvalFlags eval_flags;
    auto* eval = app.add_subcommand("eval", "Score a carve manifest against ground truth");
    eval->add_option("--truth", eval_flags.truth, "Ground-truth path")->required();
    eval->add_option("--manifest", eval_flags.manifest, "Manifest path")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "carve: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (carve->parsed()) return cmd_carve(carve_flags, out);
        if (bench->parsed()) return cmd_bench(bench_flags, out);
        if (gen->parsed()) return cmd_gen(gen_flags, out);
        if (eval->parsed()) return cmd_eval(eval_flags, out);
        err << "carve: no command\n";
        return kExitUsage;
    } catch (const IoError& e) {
        err << "carve: " << e.what() << '\n';
        return kExitIo;
    } catch (const InvariantError& e) {
        err << "carve: internal error: " << e.what() << '\n';
        return kExitInternal;
    } catch (const Error& e) {
        // Parse, validation, infeasible packing and usage errors.
        err << "carve: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "carve: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "carve: internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace carve::cli
