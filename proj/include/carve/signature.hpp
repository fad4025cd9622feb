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

#include "carve/bytes.hpp"

namespace carve {

inline constexpr std::uint64_t kDefaultMaxFileSize = 10ull * 1024 * 1024;

// One file type's identity as used by the carver.
struct Signature {
    std::string id;
    std::string name;
    Bytes header;
    std::optional<Bytes> footer;
    std::uint64_t max_file_size = kDefaultMaxFileSize;
    std::string extension;
    std::optional<std::string> validator;

    std::size_t footer_length() const noexcept { return footer ? footer->size() : 0; }

    friend bool operator==(const Signature&, const Signature&) = default;
};

// Immutable, validated collection of signatures. Safe to share across threads.
class SignatureSet {
  public:
    SignatureSet() = default;

    // Throws ValidationError if any signature or the set as a whole is invalid.
    explicit SignatureSet(std::vector<Signature> signatures);

    const std::vector<Signature>& signatures() const noexcept { return signatures_; }
    std::size_t size() const noexcept { return signatures_.size(); }
    bool empty() const noexcept { return signatures_.empty(); }

    // Longest header or footer in the set; 0 for an empty set.
    std::size_t max_component_length() const noexcept { return max_component_length_; }

    const Signature* find(std::string_view id) const noexcept;

    // Subset restricted to the given ids, in this set's order.
    SignatureSet select(const std::vector<std::string>& ids) const;

    friend bool operator==(const SignatureSet&, const SignatureSet&) = default;

  private:
    std::vector<Signature> signatures_;
    std::size_t max_component_length_ = 0;
};

// The five header/footer rows exactly as tabulated in the source table:
// JPEG, GIF, ZIP, PDF, PST.
SignatureSet builtin_paper_set();

// Same rows with GIF and ZIP corrected to their real magic numbers, plus an
// OLE "doc" row checked by ole_validator.
SignatureSet builtin_canonical_set();

// Parses the 7-field line format:
//   id name header footer max_size_bytes extension validator
// Throws ParseError (with line number) or ValidationError.
SignatureSet load_signatures(std::string_view text);

std::string serialize_signatures(const SignatureSet& set);

// Encodes bytes for a header/footer field: printable ASCII kept literal,
// everything else as \xNN.
std::string encode_field(ByteView bytes);

// Inverse of encode_field. Throws std::invalid_argument on a malformed escape.
Bytes decode_field(std::string_view field);

// True iff the input holds FE at index 28 and FF at index 29 (the 29th and
// 30th bytes). Never reads past index 29.
bool ole_validator(ByteView first_bytes) noexcept;

using Validator = bool (*)(ByteView) noexcept;

// Looks up a deep validator by its config name ("ole"). nullptr if unknown.
Validator find_validator(std::string_view name) noexcept;

// Number of leading region bytes handed to validators.
inline constexpr std::size_t kValidatorPrefixLength = 64;

}  // namespace carve
