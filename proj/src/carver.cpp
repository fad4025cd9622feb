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

#include "carve/carver.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "carve/digest.hpp"
#include "carve/error.hpp"
#include "carve/file_util.hpp"

namespace carve {

std::string_view to_string(CarveMethod method) noexcept {
    return method == CarveMethod::header_footer ? "header_footer" : "header_max_size";
}

std::string_view to_string(Validation validation) noexcept {
    switch (validation) {
        case Validation::not_applicable: return "not_applicable";
        case Validation::passed: return "passed";
        case Validation::failed: return "failed";
    }
    return "?";
}

std::optional<CarveMethod> parse_method(std::string_view text) noexcept {
    for (auto m : {CarveMethod::header_footer, CarveMethod::header_max_size}) {
        if (to_string(m) == text) return m;
    }
    return std::nullopt;
}

std::optional<Validation> parse_validation(std::string_view text) noexcept {
    for (auto v : {Validation::not_applicable, Validation::passed, Validation::failed}) {
        if (to_string(v) == text) return v;
    }
    return std::nullopt;
}

std::vector<CarveRegion> pair_matches(const MatchSet& matches, const SignatureSet& signatures,
                                      std::uint64_t image_length) {
    struct Offsets {
        std::vector<std::uint64_t> headers;
        std::vector<std::uint64_t> footers;
    };
    std::map<std::string_view, Offsets> by_signature;
    for (const auto& e : matches.events) {
        auto& o = by_signature[e.signature_id];
        (e.role == Role::header ? o.headers : o.footers).push_back(e.offset);
    }

    std::vector<CarveRegion> regions;
    for (const auto& e : matches.events) {
        if (e.role != Role::header) continue;
        const Signature* sig = signatures.find(e.signature_id);
        if (sig == nullptr) throw std::invalid_argument("match for unknown signature '" + e.signature_id + "'");
        const auto& o = by_signature[e.signature_id];
        const std::uint64_t start = e.offset;
        const std::uint64_t header_end = start + sig->header.size();

        if (sig->footer) {
            auto f = std::lower_bound(o.footers.begin(), o.footers.end(), header_end);
            if (f != o.footers.end()) {
                const std::uint64_t end = *f + sig->footer->size();
                if (end - start <= sig->max_file_size) {
                    regions.push_back({sig->id, start, end, CarveMethod::header_footer, Validation::not_applicable});
                    continue;
                }
            }
        }

        std::uint64_t length = std::min(sig->max_file_size, image_length - std::min(image_length, start));
        auto next = std::upper_bound(o.headers.begin(), o.headers.end(), start);
        if (next != o.headers.end()) length = std::min(length, *next - start);
        // Self-overlapping headers can sit closer than one header length.
        length = std::max<std::uint64_t>(length, sig->header.size());
        regions.push_back({sig->id, start, start + length, CarveMethod::header_max_size, Validation::not_applicable});
    }
    return regions;
}

CarveRegion validate_region(CarveRegion region, const ByteSource& image, const SignatureSet& signatures) {
    const Signature* sig = signatures.find(region.signature_id);
    if (sig == nullptr) throw std::invalid_argument("region of unknown signature '" + region.signature_id + "'");
    if (!sig->validator) {
        region.validation = Validation::not_applicable;
        return region;
    }
    const Validator check = find_validator(*sig->validator);
    const auto n = static_cast<std::size_t>(std::min<std::uint64_t>(kValidatorPrefixLength, region.length()));
    Bytes scratch;
    const auto lead = image.view(region.start, n, scratch);
    region.validation = check(lead) ? Validation::passed : Validation::failed;
    return region;
}

std::string output_filename(std::uint64_t start, std::string_view extension) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%012llu", static_cast<unsigned long long>(start));
    return std::string(buf) + "." + std::string(extension);
}

CarveManifest extract(std::vector<CarveRegion> regions, const ByteSource& image, const SignatureSet& signatures,
                      const std::filesystem::path& output_dir, const ExtractOptions& options) {
    std::stable_sort(regions.begin(), regions.end(),
                     [](const CarveRegion& a, const CarveRegion& b) { return a.start < b.start; });
    if (!regions.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(output_dir, ec);
        if (ec) throw IoError("cannot create " + output_dir.string() + ": " + ec.message());
    }

    CarveManifest manifest;
    std::set<std::string> used;
    Bytes scratch;
    for (auto& region : regions) {
        ManifestEntry entry{region, std::nullopt, std::nullopt};
        if (region.validation != Validation::failed || options.extract_failed) {
            const Signature* sig = signatures.find(region.signature_id);
            if (sig == nullptr) throw std::invalid_argument("region of unknown signature '" + region.signature_id + "'");
            std::string name = output_filename(region.start, sig->extension);
            for (int k = 1; used.count(name) != 0; ++k)
                name = output_filename(region.start, sig->extension)
                           .insert(12, "_" + std::to_string(k));
            used.insert(name);

            const auto bytes = image.view(region.start, static_cast<std::size_t>(region.length()), scratch);
            write_file(output_dir / name, bytes);
            entry.output_file = name;
            entry.digest = sha256_hex(bytes);
        }
        manifest.entries.push_back(std::move(entry));
    }
    return manifest;
}

namespace {

using ojson = nlohmann::ordered_json;

template <class T>
ojson nullable(const std::optional<T>& v) {
    return v ? ojson(*v) : ojson(nullptr);
}

}  // namespace

std::string format_manifest(const CarveManifest& manifest) {
    std::string out;
    ojson head;
    head["image_path"] = manifest.image.path;
    head["image_length"] = manifest.image.length;
    head["image_sha256"] = manifest.image.sha256;
    head["signature_set"] = manifest.signature_set;
    out += head.dump() + "\n";
    for (const auto& e : manifest.entries) {
        ojson rec;
        rec["signature_id"] = e.region.signature_id;
        rec["start"] = e.region.start;
        rec["end"] = e.region.end;
        rec["length"] = e.region.length();
        rec["method"] = to_string(e.region.method);
        rec["validation"] = to_string(e.region.validation);
        rec["output_file"] = nullable(e.output_file);
        rec["digest"] = nullable(e.digest);
        out += rec.dump() + "\n";
    }
    return out;
}

CarveManifest parse_manifest(std::string_view text) {
    CarveManifest manifest;
    std::size_t line_no = 0;
    bool have_head = false;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        const std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            if (!have_head) {
                manifest.image.path = j.at("image_path").get<std::string>();
                manifest.image.length = j.at("image_length").get<std::uint64_t>();
                manifest.image.sha256 = j.at("image_sha256").get<std::string>();
                manifest.signature_set = j.at("signature_set").get<std::string>();
                have_head = true;
                continue;
            }
            ManifestEntry e;
            e.region.signature_id = j.at("signature_id").get<std::string>();
            e.region.start = j.at("start").get<std::uint64_t>();
            e.region.end = j.at("end").get<std::uint64_t>();
            auto method = parse_method(j.at("method").get<std::string>());
            auto validation = parse_validation(j.at("validation").get<std::string>());
            if (!method || !validation) throw ParseError(line_no, "unknown method or validation");
            e.region.method = *method;
            e.region.validation = *validation;
            if (!j.at("output_file").is_null()) e.output_file = j["output_file"].get<std::string>();
            if (!j.at("digest").is_null()) e.digest = j["digest"].get<std::string>();
            if (e.region.end < e.region.start || j.at("length").get<std::uint64_t>() != e.region.length())
                throw ParseError(line_no, "inconsistent start/end/length");
            manifest.entries.push_back(std::move(e));
        } catch (const nlohmann::json::exception& ex) {
            throw ParseError(line_no, ex.what());
        }
    }
    if (!have_head) throw ParseError(line_no, "manifest has no image line");
    return manifest;
}

}  // namespace carve
