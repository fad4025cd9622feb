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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carve/byte_source.hpp"
#include "carve/search.hpp"
#include "carve/signature.hpp"

namespace carve {

enum class Backend { brute, kmp, bm, ac };

std::string_view to_string(Backend backend) noexcept;
std::optional<Backend> parse_backend(std::string_view name) noexcept;

inline constexpr std::uint64_t kDefaultChunkSize = 1024 * 1024;

std::size_t default_workers() noexcept;

// One unit of parallel work. The worker reads
// [start, start + payload_length + overlap_length) but owns only the
// occurrences starting inside the payload.
struct ChunkSpec {
    std::size_t index = 0;
    std::uint64_t start = 0;
    std::uint64_t payload_length = 0;
    std::uint64_t overlap_length = 0;

    friend bool operator==(const ChunkSpec&, const ChunkSpec&) = default;
};

// Throws std::invalid_argument when chunk_size < max_component_length or
// chunk_size == 0.
std::vector<ChunkSpec> plan_chunks(std::uint64_t image_length, std::uint64_t chunk_size,
                                   std::size_t max_component_length);

struct MatchEvent {
    std::string signature_id;
    Role role = Role::header;
    std::uint64_t offset = 0;

    friend bool operator==(const MatchEvent&, const MatchEvent&) = default;
};

// Offset, then signature id, then role (header before footer).
bool event_less(const MatchEvent& a, const MatchEvent& b) noexcept;

struct MatchSet {
    std::vector<MatchEvent> events;

    friend bool operator==(const MatchSet&, const MatchSet&) = default;
};

// One line per event: "<offset> <signature_id> <role>\n".
std::string serialize(const MatchSet& matches);

struct ScanOptions {
    Backend backend = Backend::ac;
    std::size_t workers = default_workers();
    std::uint64_t chunk_size = kDefaultChunkSize;
};

// Finds every header and footer occurrence of every signature. The result
// does not depend on workers or chunk_size. Throws std::invalid_argument for
// bad options and IoError for unreadable regions.
MatchSet scan(const ByteSource& image, const SignatureSet& signatures, const ScanOptions& options = {});

}  // namespace carve
