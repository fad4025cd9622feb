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

// Synthetic disk images with planted, contiguous files and their ground
// truth, plus precision/recall scoring of a carve against that truth.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "carve/bytes.hpp"
#include "carve/carver.hpp"
#include "carve/error.hpp"
#include "carve/search.hpp"
#include "carve/signature.hpp"

namespace carve {

// Deterministic generator: std::mt19937_64 (fully specified by the C++
// standard) with integer ranges reduced by rejection sampling rather than a
// library distribution, so a seed yields the same image on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    // Uniform in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
        return lo + (hi - lo == ~std::uint64_t{0} ? next() : below(hi - lo + 1));
    }

    // Eight bytes per draw, little-endian.
    void fill(std::span<Byte> out);

  private:
    std::mt19937_64 engine_;
};

struct PlantedFile {
    std::string signature_id;
    std::uint64_t start = 0;
    std::uint64_t end = 0;

    friend bool operator==(const PlantedFile&, const PlantedFile&) = default;
};

// Bare header or footer injected into filler in adversarial mode.
struct Decoy {
    std::string signature_id;
    Role role = Role::header;
    std::uint64_t offset = 0;
    std::uint64_t length = 0;

    friend bool operator==(const Decoy&, const Decoy&) = default;
};

struct GroundTruth {
    std::uint64_t image_length = 0;
    std::uint64_t seed = 0;
    std::string image_sha256;
    std::string filler_policy;  // "sanitized" or "adversarial"
    std::vector<PlantedFile> planted;
    std::vector<Decoy> decoys;

    friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct GenerateOptions {
    std::size_t file_count = 0;
    std::uint64_t min_file_size = 256;   // whole file, header and footer included
    std::uint64_t max_file_size = 65536;
    std::uint64_t image_length = 0;
    std::uint64_t seed = 0;
    bool adversarial = false;
};

struct GeneratedImage {
    Bytes image;
    GroundTruth truth;
};

class InfeasibleError : public Error {
  public:
    using Error::Error;
};

// Plants file_count files of uniformly chosen signatures at non-overlapping
// seeded positions. Bodies and filler are random bytes re-drawn until the
// image holds no header or footer occurrence other than the planted ones
// (and, in adversarial mode, the decoys). Throws InfeasibleError if the
// files cannot be packed or sanitisation does not converge.
GeneratedImage generate_image(const SignatureSet& signatures, const GenerateOptions& options);

struct EvalReport {
    std::size_t planted = 0;
    std::size_t carved = 0;
    std::size_t exact = 0;
    std::size_t partial = 0;
    double precision = 1.0;
    double recall = 1.0;
};

// Exact = same (signature, start, end) as a planted file; partial = same
// signature and start, different end. 0/0 ratios are reported as 1.0.
// Throws ValidationError if the manifest describes a different image.
EvalReport evaluate(const GroundTruth& truth, const CarveManifest& manifest);

std::string format_truth(const GroundTruth& truth);
GroundTruth parse_truth(std::string_view text);

}  // namespace carve
