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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carve/byte_source.hpp"
#include "carve/scanner.hpp"
#include "carve/signature.hpp"

namespace carve {

enum class CarveMethod { header_footer, header_max_size };
enum class Validation { not_applicable, passed, failed };

std::string_view to_string(CarveMethod method) noexcept;
std::string_view to_string(Validation validation) noexcept;
std::optional<CarveMethod> parse_method(std::string_view text) noexcept;
std::optional<Validation> parse_validation(std::string_view text) noexcept;

// A recovered file candidate, [start, end) in image coordinates.
struct CarveRegion {
    std::string signature_id;
    std::uint64_t start = 0;
    std::uint64_t end = 0;
    CarveMethod method = CarveMethod::header_footer;
    Validation validation = Validation::not_applicable;

    std::uint64_t length() const noexcept { return end - start; }

    friend bool operator==(const CarveRegion&, const CarveRegion&) = default;
};

// Header-footer pairing with header/max-file-size fallback.
//
// Each header event of signature S yields exactly one region:
//  - header_footer, ending after the first footer of S that starts at or
//    after the end of the header, if that region fits in S.max_file_size;
//  - header_max_size otherwise, with length
//      min(max_file_size, image_length - start, next header of S - start)
//    but never shorter than the header itself.
// Footers may close several headers (nested/embedded files).
std::vector<CarveRegion> pair_matches(const MatchSet& matches, const SignatureSet& signatures,
                                      std::uint64_t image_length);

// Runs the signature's deep validator, if any, over the region's first
// kValidatorPrefixLength bytes.
CarveRegion validate_region(CarveRegion region, const ByteSource& image, const SignatureSet& signatures);

struct ImageIdentity {
    std::string path;
    std::uint64_t length = 0;
    std::string sha256;

    friend bool operator==(const ImageIdentity&, const ImageIdentity&) = default;
};

struct ManifestEntry {
    CarveRegion region;
    std::optional<std::string> output_file;
    std::optional<std::string> digest;

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct CarveManifest {
    ImageIdentity image;
    std::string signature_set;  // "paper", "canonical" or a config path
    std::vector<ManifestEntry> entries;

    friend bool operator==(const CarveManifest&, const CarveManifest&) = default;
};

struct ExtractOptions {
    bool extract_failed = false;
};

// Writes one file per region (failed regions only when asked) named
// <12-digit start offset>.<extension> into output_dir, creating it if needed.
// Regions are listed in ascending start order. The manifest itself is not
// written here; see format_manifest.
CarveManifest extract(std::vector<CarveRegion> regions, const ByteSource& image, const SignatureSet& signatures,
                      const std::filesystem::path& output_dir, const ExtractOptions& options = {});

// JSON lines: an image line followed by one record per region, keys in the
// fixed order signature_id,start,end,length,method,validation,output_file,digest.
std::string format_manifest(const CarveManifest& manifest);
CarveManifest parse_manifest(std::string_view text);

std::string output_filename(std::uint64_t start, std::string_view extension);

}  // namespace carve
