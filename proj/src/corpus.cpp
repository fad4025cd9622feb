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

#include "carve/corpus.hpp"

#include <algorithm>
#include <cstring>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "carve/digest.hpp"

namespace carve {

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = next();
        if (r >= threshold) return r % bound;
    }
}

void Rng::fill(std::span<Byte> out) {
    std::size_t i = 0;
    for (; i + 8 <= out.size(); i += 8) {
        const std::uint64_t r = next();
        for (int k = 0; k < 8; ++k) out[i + k] = static_cast<Byte>(r >> (8 * k));
    }
    if (i < out.size()) {
        const std::uint64_t r = next();
        for (int k = 0; i < out.size(); ++i, ++k) out[i] = static_cast<Byte>(r >> (8 * k));
    }
}

namespace {

constexpr int kMaxSanitizePasses = 64;
constexpr int kDecoyAttempts = 32;

struct Allowed {
    std::size_t pattern;
    std::uint64_t offset;
    friend auto operator<=>(const Allowed&, const Allowed&) = default;
};

struct PatternTable {
    std::vector<Pattern> patterns;
    std::vector<std::size_t> header_index;  // per signature
    std::vector<std::size_t> footer_index;  // per signature; npos when footerless
};

PatternTable pattern_table(const SignatureSet& signatures) {
    PatternTable t;
    for (const auto& sig : signatures.signatures()) {
        t.header_index.push_back(t.patterns.size());
        t.patterns.push_back({{sig.id, Role::header}, sig.header});
        if (sig.footer) {
            t.footer_index.push_back(t.patterns.size());
            t.patterns.push_back({{sig.id, Role::footer}, *sig.footer});
        } else {
            t.footer_index.push_back(std::string::npos);
        }
    }
    return t;
}

void place(Bytes& image, std::vector<Byte>& fixed, std::uint64_t at, ByteView bytes) {
    std::copy(bytes.begin(), bytes.end(), image.begin() + static_cast<std::ptrdiff_t>(at));
    std::fill_n(fixed.begin() + static_cast<std::ptrdiff_t>(at), bytes.size(), Byte{1});
}

// Re-draws free bytes until the only occurrences left are the allowed ones.
void sanitize(Bytes& image, const std::vector<Byte>& fixed, const PatternTable& table,
              const std::set<Allowed>& allowed, Rng& rng) {
    if (table.patterns.empty() || image.empty()) return;
    const Automaton automaton(table.patterns);
    std::size_t longest = 0;
    for (const auto& p : table.patterns) longest = std::max(longest, p.bytes.size());

    // Windows still to be scanned, as [begin, end).
    std::vector<std::pair<std::uint64_t, std::uint64_t>> windows{{0, image.size()}};
    for (int pass = 0; pass < kMaxSanitizePasses; ++pass) {
        std::vector<std::uint64_t> touched;
        std::set<Allowed> seen;
        for (const auto& [begin, end] : windows) {
            const ByteView window(image.data() + begin, end - begin);
            automaton.for_each_match(window, [&](std::size_t p, std::size_t off) {
                const Allowed hit{p, begin + off};
                if (allowed.count(hit) != 0 || !seen.insert(hit).second) return;
                bool any_free = false;
                for (std::uint64_t i = hit.offset; i < hit.offset + table.patterns[p].bytes.size(); ++i) {
                    if (!fixed[i]) {
                        any_free = true;
                        touched.push_back(i);
                    }
                }
                if (!any_free)
                    throw InfeasibleError("planted bytes form a stray '" + table.patterns[p].id.name + "' " +
                                          std::string(to_string(table.patterns[p].id.role)) + " at offset " +
                                          std::to_string(hit.offset));
            });
        }
        if (touched.empty()) return;

        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (auto i : touched) image[i] = static_cast<Byte>(rng.next());

        windows.clear();
        for (auto i : touched) {
            const std::uint64_t b = i + 1 >= longest ? i + 1 - longest : 0;
            const std::uint64_t e = std::min<std::uint64_t>(image.size(), i + longest);
            if (!windows.empty() && b <= windows.back().second)
                windows.back().second = std::max(windows.back().second, e);
            else
                windows.emplace_back(b, e);
        }
    }
    throw InfeasibleError("filler sanitisation did not converge after " + std::to_string(kMaxSanitizePasses) +
                          " passes");
}

}  // namespace

GeneratedImage generate_image(const SignatureSet& signatures, const GenerateOptions& options) {
    if (options.min_file_size > options.max_file_size)
        throw std::invalid_argument("minimum file size exceeds maximum file size");

    GeneratedImage out;
    auto& truth = out.truth;
    truth.image_length = options.image_length;
    truth.seed = options.seed;
    truth.filler_policy = options.adversarial ? "adversarial" : "sanitized";

    // Signatures that can host a file inside the size range.
    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < signatures.size(); ++i) {
        const auto& sig = signatures.signatures()[i];
        const auto lo = std::max(options.min_file_size, sig.header.size() + sig.footer_length());
        const auto hi = std::min(options.max_file_size, sig.max_file_size);
        if (lo <= hi) eligible.push_back(i);
    }
    const std::uint64_t n = options.file_count;
    if (n > 0 && eligible.empty())
        throw InfeasibleError("no signature fits the requested file size range");
    if (n > 0) {
        const std::uint64_t gaps = n - 1;
        if (options.max_file_size > (options.image_length - std::min(options.image_length, gaps)) / n)
            throw InfeasibleError("cannot pack " + std::to_string(n) + " files of up to " +
                                  std::to_string(options.max_file_size) + " bytes into " +
                                  std::to_string(options.image_length) + " bytes");
    }

    Rng rng(options.seed);
    std::vector<std::size_t> kinds(n);
    std::vector<std::uint64_t> sizes(n);
    std::uint64_t total = 0;
    for (std::uint64_t k = 0; k < n; ++k) {
        kinds[k] = eligible[rng.below(eligible.size())];
        const auto& sig = signatures.signatures()[kinds[k]];
        sizes[k] = rng.between(std::max(options.min_file_size, sig.header.size() + sig.footer_length()),
                               std::min(options.max_file_size, sig.max_file_size));
        total += sizes[k];
    }

    // Spread the slack over the n + 1 gaps; files keep a one-byte minimum
    // separation.
    const std::uint64_t slack = options.image_length - total - (n > 0 ? n - 1 : 0);
    std::vector<std::uint64_t> cuts(n);
    for (auto& c : cuts) c = rng.between(0, slack);
    std::sort(cuts.begin(), cuts.end());

    Bytes& image = out.image;
    image.resize(options.image_length);
    rng.fill(image);
    std::vector<Byte> fixed(image.size(), 0);

    const PatternTable table = pattern_table(signatures);
    std::set<Allowed> allowed;
    std::uint64_t cursor = 0;
    for (std::uint64_t k = 0; k < n; ++k) {
        const auto& sig = signatures.signatures()[kinds[k]];
        const std::uint64_t start = cuts[k] + cursor;
        const std::uint64_t end = start + sizes[k];
        cursor += sizes[k] + 1;
        place(image, fixed, start, sig.header);
        allowed.insert({table.header_index[kinds[k]], start});
        if (sig.footer) {
            place(image, fixed, end - sig.footer->size(), *sig.footer);
            allowed.insert({table.footer_index[kinds[k]], end - sig.footer->size()});
        }
        truth.planted.push_back({sig.id, start, end});
    }

    if (options.adversarial && !signatures.empty()) {
        const std::uint64_t decoys = std::max<std::uint64_t>(1, n);
        for (std::uint64_t d = 0; d < decoys; ++d) {
            const std::size_t s = rng.below(signatures.size());
            const auto& sig = signatures.signatures()[s];
            const bool footer = sig.footer && rng.below(2) == 1;
            const ByteView bytes = footer ? ByteView(*sig.footer) : ByteView(sig.header);
            if (image.size() < bytes.size() + 2) break;
            for (int attempt = 0; attempt < kDecoyAttempts; ++attempt) {
                const std::uint64_t at = 1 + rng.below(image.size() - bytes.size() - 1);
                // Keep one free byte on each side of the decoy.
                if (std::any_of(fixed.begin() + static_cast<std::ptrdiff_t>(at - 1),
                                fixed.begin() + static_cast<std::ptrdiff_t>(std::min<std::uint64_t>(
                                                    image.size(), at + bytes.size() + 1)),
                                [](Byte f) { return f != 0; }))
                    continue;
                place(image, fixed, at, bytes);
                allowed.insert({footer ? table.footer_index[s] : table.header_index[s], at});
                truth.decoys.push_back({sig.id, footer ? Role::footer : Role::header, at, bytes.size()});
                break;
            }
        }
        std::sort(truth.decoys.begin(), truth.decoys.end(),
                  [](const Decoy& a, const Decoy& b) { return a.offset < b.offset; });
    }

    sanitize(image, fixed, table, allowed, rng);
    truth.image_sha256 = sha256_hex(image);
    return out;
}

EvalReport evaluate(const GroundTruth& truth, const CarveManifest& manifest) {
    if (manifest.image.length != truth.image_length ||
        (!truth.image_sha256.empty() && !manifest.image.sha256.empty() &&
         manifest.image.sha256 != truth.image_sha256))
        throw ValidationError("manifest and ground truth describe different images");

    using Key = std::tuple<std::string, std::uint64_t, std::uint64_t>;
    std::multiset<Key> unmatched;
    std::set<std::pair<std::string, std::uint64_t>> starts;
    for (const auto& p : truth.planted) {
        unmatched.insert({p.signature_id, p.start, p.end});
        starts.insert({p.signature_id, p.start});
    }

    EvalReport r;
    r.planted = truth.planted.size();
    r.carved = manifest.entries.size();
    for (const auto& e : manifest.entries) {
        const auto& g = e.region;
        auto it = unmatched.find({g.signature_id, g.start, g.end});
        if (it != unmatched.end()) {
            ++r.exact;
            unmatched.erase(it);
        } else if (starts.count({g.signature_id, g.start}) != 0) {
            ++r.partial;
        }
    }
    r.precision = r.carved == 0 ? 1.0 : static_cast<double>(r.exact) / static_cast<double>(r.carved);
    r.recall = r.planted == 0 ? 1.0 : static_cast<double>(r.exact) / static_cast<double>(r.planted);
    return r;
}

std::string format_truth(const GroundTruth& truth) {
    using ojson = nlohmann::ordered_json;
    std::string out;
    ojson head;
    head["image_length"] = truth.image_length;
    head["seed"] = truth.seed;
    head["image_sha256"] = truth.image_sha256;
    head["filler"] = truth.filler_policy;
    out += head.dump() + "\n";
    for (const auto& p : truth.planted) {
        ojson rec;
        rec["signature_id"] = p.signature_id;
        rec["start"] = p.start;
        rec["end"] = p.end;
        out += rec.dump() + "\n";
    }
    for (const auto& d : truth.decoys) {
        ojson rec;
        rec["signature_id"] = d.signature_id;
        rec["start"] = d.offset;
        rec["end"] = d.offset + d.length;
        rec["decoy"] = to_string(d.role);
        out += rec.dump() + "\n";
    }
    return out;
}

GroundTruth parse_truth(std::string_view text) {
    GroundTruth truth;
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
                truth.image_length = j.at("image_length").get<std::uint64_t>();
                truth.seed = j.at("seed").get<std::uint64_t>();
                truth.image_sha256 = j.value("image_sha256", std::string{});
                truth.filler_policy = j.value("filler", std::string{});
                have_head = true;
                continue;
            }
            const auto id = j.at("signature_id").get<std::string>();
            const auto start = j.at("start").get<std::uint64_t>();
            const auto end = j.at("end").get<std::uint64_t>();
            if (end < start) throw ParseError(line_no, "end before start");
            if (j.contains("decoy")) {
                const auto role = j["decoy"].get<std::string>();
                if (role != "header" && role != "footer") throw ParseError(line_no, "bad decoy role");
                truth.decoys.push_back({id, role == "header" ? Role::header : Role::footer, start, end - start});
            } else {
                truth.planted.push_back({id, start, end});
            }
        } catch (const nlohmann::json::exception& ex) {
            throw ParseError(line_no, ex.what());
        }
    }
    if (!have_head) throw ParseError(line_no, "ground truth has no header line");
    return truth;
}

}  // namespace carve
