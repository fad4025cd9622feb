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

#include "carve/signature.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

#include "carve/error.hpp"

namespace carve {

namespace {

bool is_token(std::string_view s) {
    return !s.empty() && std::none_of(s.begin(), s.end(), [](char c) {
        return static_cast<unsigned char>(c) <= 0x20 || c == 0x7F;
    });
}

void check_signature(const Signature& sig) {
    auto fail = [&](const std::string& what) {
        throw ValidationError("signature '" + sig.id + "': " + what);
    };
    if (!is_token(sig.id)) fail("id must be a non-empty token");
    if (!is_token(sig.name)) fail("name must be a non-empty token");
    if (!is_token(sig.extension)) fail("extension must be a non-empty token");
    if (sig.header.empty()) fail("zero-length header");
    if (sig.footer && sig.footer->empty()) fail("zero-length footer");
    if (sig.max_file_size < sig.header.size() + sig.footer_length())
        fail("max_file_size smaller than header plus footer");
    if (sig.validator && find_validator(*sig.validator) == nullptr)
        fail("unknown validator '" + *sig.validator + "'");
}

Signature make(std::string id, std::string name, Bytes header, std::optional<Bytes> footer,
               std::string ext, std::optional<std::string> validator = std::nullopt) {
    return Signature{std::move(id),  std::move(name), std::move(header),   std::move(footer),
                     kDefaultMaxFileSize, std::move(ext), std::move(validator)};
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

SignatureSet::SignatureSet(std::vector<Signature> signatures) : signatures_(std::move(signatures)) {
    std::set<std::string_view> ids;
    for (const auto& sig : signatures_) {
        check_signature(sig);
        if (!ids.insert(sig.id).second) throw ValidationError("duplicate signature id '" + sig.id + "'");
        max_component_length_ = std::max({max_component_length_, sig.header.size(), sig.footer_length()});
    }
}

const Signature* SignatureSet::find(std::string_view id) const noexcept {
    auto it = std::find_if(signatures_.begin(), signatures_.end(),
                           [&](const Signature& s) { return s.id == id; });
    return it == signatures_.end() ? nullptr : &*it;
}

SignatureSet SignatureSet::select(const std::vector<std::string>& ids) const {
    for (const auto& id : ids) {
        if (find(id) == nullptr) throw ValidationError("unknown signature id '" + id + "'");
    }
    std::vector<Signature> kept;
    for (const auto& sig : signatures_) {
        if (std::find(ids.begin(), ids.end(), sig.id) != ids.end()) kept.push_back(sig);
    }
    return SignatureSet(std::move(kept));
}

SignatureSet builtin_paper_set() {
    return SignatureSet({
        make("jpeg", "JPEG", {0xFF, 0xD8}, Bytes{0xFF, 0xD9}, "jpg"),
        make("gif", "GIF", {0x47, 0x49, 0x61}, Bytes{0x00, 0x3B}, "gif"),
        make("zip", "ZIP", {'P', 'K', 0x03, 0x04}, Bytes{0x3C, 0xAC}, "zip"),
        make("pdf", "PDF", to_bytes("%PDF"), to_bytes("%EOF"), "pdf"),
        make("pst", "PST", to_bytes("!BDN"), std::nullopt, "pst"),
    });
}

SignatureSet builtin_canonical_set() {
    return SignatureSet({
        make("jpeg", "JPEG", {0xFF, 0xD8}, Bytes{0xFF, 0xD9}, "jpg"),
        make("gif", "GIF", to_bytes("GIF8"), Bytes{0x00, 0x3B}, "gif"),
        make("zip", "ZIP", {'P', 'K', 0x03, 0x04}, Bytes{'P', 'K', 0x05, 0x06}, "zip"),
        make("pdf", "PDF", to_bytes("%PDF"), to_bytes("%EOF"), "pdf"),
        make("pst", "PST", to_bytes("!BDN"), std::nullopt, "pst"),
        make("doc", "OLE", {0xD0, 0xCF, 0x11, 0xE0, 0xA1, 0xB1, 0x1A, 0xE1}, std::nullopt, "doc",
             "ole"),
    });
}

std::string encode_field(ByteView bytes) {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out;
    for (Byte b : bytes) {
        if (b > 0x20 && b < 0x7F && b != '\\') {
            out.push_back(static_cast<char>(b));
        } else {
            out += "\\x";
            out.push_back(kHex[b >> 4]);
            out.push_back(kHex[b & 0xF]);
        }
    }
    // A bare "-" would read back as an absent footer.
    if (out == "-") out = "\\x2D";
    return out;
}

Bytes decode_field(std::string_view field) {
    Bytes out;
    for (std::size_t i = 0; i < field.size(); ++i) {
        if (field[i] != '\\') {
            out.push_back(static_cast<Byte>(field[i]));
            continue;
        }
        if (i + 3 >= field.size() || field[i + 1] != 'x')
            throw std::invalid_argument("malformed escape in '" + std::string(field) + "'");
        int hi = hex_digit(field[i + 2]);
        int lo = hex_digit(field[i + 3]);
        if (hi < 0 || lo < 0)
            throw std::invalid_argument("malformed escape in '" + std::string(field) + "'");
        out.push_back(static_cast<Byte>(hi * 16 + lo));
        i += 3;
    }
    return out;
}

SignatureSet load_signatures(std::string_view text) {
    std::vector<Signature> sigs;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        auto fields = split_fields(line);
        if (fields.empty() || fields[0].front() == '#') continue;
        if (fields.size() != 7)
            throw ParseError(line_no, "expected 7 fields, found " + std::to_string(fields.size()));

        Signature sig;
        sig.id = fields[0];
        sig.name = fields[1];
        try {
            sig.header = decode_field(fields[2]);
            if (fields[3] != "-") sig.footer = decode_field(fields[3]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(line_no, e.what());
        }
        auto size_field = fields[4];
        auto [ptr, ec] = std::from_chars(size_field.data(), size_field.data() + size_field.size(),
                                         sig.max_file_size);
        if (ec != std::errc{} || ptr != size_field.data() + size_field.size() || sig.max_file_size == 0)
            throw ParseError(line_no, "bad max_size_bytes '" + std::string(size_field) + "'");
        sig.extension = fields[5];
        if (fields[6] != "-") sig.validator = std::string(fields[6]);
        sigs.push_back(std::move(sig));
    }
    return SignatureSet(std::move(sigs));
}

std::string serialize_signatures(const SignatureSet& set) {
    std::ostringstream out;
    out << "# id name header footer max_size_bytes extension validator\n";
    for (const auto& sig : set.signatures()) {
        out << sig.id << ' ' << sig.name << ' ' << encode_field(sig.header) << ' '
            << (sig.footer ? encode_field(*sig.footer) : "-") << ' ' << sig.max_file_size << ' '
            << sig.extension << ' ' << sig.validator.value_or("-") << '\n';
    }
    return out.str();
}

bool ole_validator(ByteView first_bytes) noexcept {
    return first_bytes.size() >= 30 && first_bytes[28] == 0xFE && first_bytes[29] == 0xFF;
}

Validator find_validator(std::string_view name) noexcept {
    if (name == "ole") return &ole_validator;
    return nullptr;
}

}  // namespace carve
