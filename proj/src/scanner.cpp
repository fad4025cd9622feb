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

#include "carve/scanner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <variant>

#include "carve/error.hpp"

namespace carve {

std::string_view to_string(Backend backend) noexcept {
    switch (backend) {
        case Backend::brute: return "brute";
        case Backend::kmp: return "kmp";
        case Backend::bm: return "bm";
        case Backend::ac: return "ac";
    }
    return "?";
}

std::optional<Backend> parse_backend(std::string_view name) noexcept {
    for (auto b : {Backend::brute, Backend::kmp, Backend::bm, Backend::ac}) {
        if (to_string(b) == name) return b;
    }
    return std::nullopt;
}

std::size_t default_workers() noexcept { return std::max(1u, std::thread::hardware_concurrency()); }

std::vector<ChunkSpec> plan_chunks(std::uint64_t image_length, std::uint64_t chunk_size,
                                   std::size_t max_component_length) {
    if (chunk_size == 0) throw std::invalid_argument("chunk size must be positive");
    if (chunk_size < max_component_length)
        throw std::invalid_argument("chunk size " + std::to_string(chunk_size) +
                                    " is smaller than the longest signature component (" +
                                    std::to_string(max_component_length) + ")");
    const std::uint64_t overlap = max_component_length > 0 ? max_component_length - 1 : 0;
    std::vector<ChunkSpec> chunks;
    chunks.reserve((image_length + chunk_size - 1) / chunk_size);
    for (std::uint64_t start = 0; start < image_length; start += chunk_size) {
        const std::uint64_t payload = std::min(chunk_size, image_length - start);
        const std::uint64_t remaining = image_length - start - payload;
        chunks.push_back({chunks.size(), start, payload, std::min(overlap, remaining)});
    }
    return chunks;
}

bool event_less(const MatchEvent& a, const MatchEvent& b) noexcept {
    if (a.offset != b.offset) return a.offset < b.offset;
    if (a.signature_id != b.signature_id) return a.signature_id < b.signature_id;
    return a.role < b.role;
}

std::string serialize(const MatchSet& matches) {
    std::ostringstream out;
    for (const auto& e : matches.events) out << e.offset << ' ' << e.signature_id << ' ' << to_string(e.role) << '\n';
    return out.str();
}

namespace {

struct PatternMeta {
    std::size_t signature;
    Role role;
    std::size_t rank;  // position in (signature id, role) order
};

struct LocalHit {
    std::uint64_t offset;
    std::size_t rank;
    std::size_t pattern;
};

// Search state prepared once per scan and shared read-only by all workers.
class Matcher {
  public:
    Matcher(const SignatureSet& signatures, Backend backend) {
        std::vector<Pattern> patterns;
        for (std::size_t i = 0; i < signatures.size(); ++i) {
            const auto& sig = signatures.signatures()[i];
            patterns.push_back({{sig.id, Role::header}, sig.header});
            meta_.push_back({i, Role::header, 0});
            if (sig.footer) {
                patterns.push_back({{sig.id, Role::footer}, *sig.footer});
                meta_.push_back({i, Role::footer, 0});
            }
        }
        std::vector<std::size_t> order(patterns.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return patterns[a].id < patterns[b].id; });
        for (std::size_t r = 0; r < order.size(); ++r) meta_[order[r]].rank = r;

        switch (backend) {
            case Backend::ac: engine_.emplace<Automaton>(std::move(patterns)); break;
            case Backend::bm: {
                auto& v = engine_.emplace<std::vector<BmTables>>();
                for (auto& p : patterns) v.emplace_back(std::move(p));
                break;
            }
            case Backend::kmp: {
                auto& v = engine_.emplace<std::vector<KmpTable>>();
                for (auto& p : patterns) v.emplace_back(std::move(p));
                break;
            }
            case Backend::brute: engine_.emplace<std::vector<Pattern>>(std::move(patterns)); break;
        }
    }

    const PatternMeta& meta(std::size_t pattern) const { return meta_[pattern]; }

    // Appends hits starting before `owned` to `hits`, sorted.
    void run(ByteView window, std::uint64_t base, std::uint64_t owned, std::vector<LocalHit>& hits) const {
        auto emit_for = [&](std::size_t p) {
            return [&, p](std::size_t offset) {
                if (offset < owned) hits.push_back({base + offset, meta_[p].rank, p});
            };
        };
        if (const auto* ac = std::get_if<Automaton>(&engine_)) {
            ac->for_each_match(window, [&](std::size_t p, std::size_t offset) {
                if (offset < owned) hits.push_back({base + offset, meta_[p].rank, p});
            });
        } else if (const auto* bm = std::get_if<std::vector<BmTables>>(&engine_)) {
            for (std::size_t p = 0; p < bm->size(); ++p) (*bm)[p].for_each_match(window, emit_for(p));
        } else if (const auto* kmp = std::get_if<std::vector<KmpTable>>(&engine_)) {
            for (std::size_t p = 0; p < kmp->size(); ++p) (*kmp)[p].for_each_match(window, emit_for(p));
        } else if (const auto* brute = std::get_if<std::vector<Pattern>>(&engine_)) {
            for (std::size_t p = 0; p < brute->size(); ++p)
                brute_force_for_each((*brute)[p].bytes, window, emit_for(p));
        }
        std::sort(hits.begin(), hits.end(), [](const LocalHit& a, const LocalHit& b) {
            return a.offset != b.offset ? a.offset < b.offset : a.rank < b.rank;
        });
    }

  private:
    std::vector<PatternMeta> meta_;
    std::variant<std::monostate, Automaton, std::vector<BmTables>, std::vector<KmpTable>, std::vector<Pattern>>
        engine_;
};

}  // namespace

MatchSet scan(const ByteSource& image, const SignatureSet& signatures, const ScanOptions& options) {
    if (options.workers == 0) throw std::invalid_argument("worker count must be at least 1");
    const auto chunks = plan_chunks(image.length(), options.chunk_size, signatures.max_component_length());
    if (signatures.empty() || chunks.empty()) return {};

    const Matcher matcher(signatures, options.backend);
    std::vector<std::vector<LocalHit>> slots(chunks.size());

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        Bytes scratch;
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= chunks.size() || failed.load(std::memory_order_relaxed)) return;
            const auto& c = chunks[i];
            try {
                const std::size_t count = c.payload_length + c.overlap_length;
                ByteView window;
                try {
                    window = image.view(c.start, count, scratch);
                } catch (const IoError& e) {
                    throw IoError("scan of " + describe_range(c.start, count) + " failed: " + e.what());
                }
                matcher.run(window, c.start, c.payload_length, slots[i]);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
                return;
            }
        }
    };

    const std::size_t threads = std::min(options.workers, chunks.size());
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);

    // Payload ownership makes the chunk-order concatenation globally sorted.
    MatchSet result;
    std::size_t total = 0;
    for (const auto& s : slots) total += s.size();
    result.events.reserve(total);
    for (const auto& slot : slots) {
        for (const auto& hit : slot) {
            const auto& m = matcher.meta(hit.pattern);
            result.events.push_back({signatures.signatures()[m.signature].id, m.role, hit.offset});
        }
    }
    for (std::size_t i = 1; i < result.events.size(); ++i) {
        if (!event_less(result.events[i - 1], result.events[i]))
            throw InvariantError("merged match set is not strictly ordered at event " + std::to_string(i));
    }
    return result;
}

}  // namespace carve
