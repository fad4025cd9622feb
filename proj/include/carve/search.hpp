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

// Exact string search backends. Every backend reports all occurrences,
// overlapping ones included, as 0-based start offsets.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "carve/bytes.hpp"

namespace carve {

enum class Role : std::uint8_t { header, footer };

std::string_view to_string(Role role) noexcept;

struct PatternId {
    std::string name;
    Role role = Role::header;

    friend auto operator<=>(const PatternId&, const PatternId&) = default;
};

struct Pattern {
    PatternId id;
    Bytes bytes;
};

struct Occurrence {
    PatternId id;
    std::size_t offset = 0;

    friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

// Instrumentation hooks. `read()` is called once per text byte inspected.
struct NullProbe {
    void read() noexcept {}
};

struct CountingProbe {
    std::uint64_t reads = 0;
    void read() noexcept { ++reads; }
};

// Reference implementation; every other backend is tested against it.
// Throws std::invalid_argument for an empty pattern.
std::vector<Occurrence> brute_force_find_all(const Pattern& pattern, ByteView text);

template <class OnMatch, class Probe = NullProbe>
void brute_force_for_each(ByteView pattern, ByteView text, OnMatch&& on_match, Probe&& probe = {}) {
    const std::size_t m = pattern.size();
    if (m == 0 || m > text.size()) return;
    for (std::size_t j = 0; j + m <= text.size(); ++j) {
        std::size_t i = 0;
        for (; i < m; ++i) {
            probe.read();
            if (text[j + i] != pattern[i]) break;
        }
        if (i == m) on_match(j);
    }
}

// ---------------------------------------------------------------------------
// Knuth-Morris-Pratt

class KmpTable {
  public:
    explicit KmpTable(Pattern pattern);

    const Pattern& pattern() const noexcept { return pattern_; }

    // prefix_function()[i] is the length of the longest proper prefix of
    // pattern[0..i] that is also a suffix of it.
    const std::vector<std::size_t>& prefix_function() const noexcept { return prefix_; }

    template <class OnMatch, class Probe = NullProbe>
    void for_each_match(ByteView text, OnMatch&& on_match, Probe&& probe = {}) const {
        const ByteView p = pattern_.bytes;
        const std::size_t m = p.size();
        std::size_t q = 0;
        for (std::size_t i = 0; i < text.size(); ++i) {
            probe.read();
            const Byte c = text[i];
            while (q > 0 && p[q] != c) q = prefix_[q - 1];
            if (p[q] == c) ++q;
            if (q == m) {
                on_match(i + 1 - m);
                q = prefix_[q - 1];
            }
        }
    }

  private:
    Pattern pattern_;
    std::vector<std::size_t> prefix_;
};

KmpTable kmp_build(const Pattern& pattern);
std::vector<Occurrence> kmp_find_all(const KmpTable& table, ByteView text);

// ---------------------------------------------------------------------------
// Boyer-Moore with both the bad-character and the good-suffix rule.

class BmTables {
  public:
    explicit BmTables(Pattern pattern);

    const Pattern& pattern() const noexcept { return pattern_; }

    // Distance from the last occurrence of `b` in pattern[0..m-2] to the
    // pattern end; m for bytes that do not occur there.
    std::size_t bad_character_shift(Byte b) const noexcept { return bad_char_[b]; }

    // Shift applied after a mismatch at pattern position i (index 0 is also
    // the shift after a full match).
    const std::vector<std::size_t>& good_suffix_shift() const noexcept { return good_suffix_; }

    template <class OnMatch, class Probe = NullProbe>
    void for_each_match(ByteView text, OnMatch&& on_match, Probe&& probe = {}) const {
        const Byte* p = pattern_.bytes.data();
        const std::size_t m = pattern_.bytes.size();
        const std::size_t n = text.size();
        if (m > n) return;
        std::size_t j = 0;
        while (j <= n - m) {
            // Right-to-left comparison within the alignment.
            std::size_t i = m;
            Byte c = 0;
            while (i > 0) {
                probe.read();
                c = text[j + i - 1];
                if (c != p[i - 1]) break;
                --i;
            }
            if (i == 0) {
                on_match(j);
                j += good_suffix_[0];
                continue;
            }
            const std::size_t pos = i - 1;
            const std::size_t gs = good_suffix_[pos];
            // bad_char_[c] counts from the pattern end; rebase to `pos`.
            const std::size_t bc_raw = bad_char_[c];
            const std::size_t tail = m - 1 - pos;
            const std::size_t bc = bc_raw > tail ? bc_raw - tail : 0;
            j += gs > bc ? gs : bc;
        }
    }

  private:
    Pattern pattern_;
    std::array<std::size_t, 256> bad_char_{};
    std::vector<std::size_t> good_suffix_;
};

BmTables bm_build(const Pattern& pattern);
std::vector<Occurrence> bm_find_all(const BmTables& tables, ByteView text);

// ---------------------------------------------------------------------------
// Aho-Corasick

// Pattern-matching machine defined by goto, failure and output functions.
// States are numbered in keyword-insertion order, root = 0. Scanning uses
// a precomputed transition table (goto with failure links folded in), so
// each text byte is read exactly once.
class Automaton {
  public:
    using State = std::uint32_t;

    // Throws std::invalid_argument on an empty list or an empty pattern.
    explicit Automaton(std::vector<Pattern> patterns);

    const std::vector<Pattern>& patterns() const noexcept { return patterns_; }
    std::size_t state_count() const noexcept { return failure_.size(); }

    // Trie edge from `state` on `b`. The root maps every byte without an
    // edge back to itself; other states return nullopt ("fail").
    std::optional<State> goto_fn(State state, Byte b) const;

    // failure_fn(0) is 0 by convention; the root never fails.
    State failure_fn(State state) const { return failure_.at(state); }

    // Pattern indices recognised on entering `state`, failure chain merged.
    std::vector<std::size_t> output_fn(State state) const;

    // Full transition function with failure links resolved.
    State next_state(State state, Byte b) const noexcept {
        return (delta_[(static_cast<std::size_t>(state) << 8) | b] & kStateMask) >> 8;
    }

    // on_match(pattern_index, start_offset) for every occurrence.
    template <class OnMatch, class Probe = NullProbe>
    void for_each_match(ByteView text, OnMatch&& on_match, Probe&& probe = {}) const {
        const std::uint32_t* delta = delta_.data();
        std::uint32_t row = 0;  // state * 256
        const Byte* data = text.data();
        const std::size_t n = text.size();
        for (std::size_t i = 0; i < n; ++i) {
            probe.read();
            row = delta[row | data[i]];
            if (row & kMatchBit) [[unlikely]] {
                row &= kStateMask;
                const State s = row >> 8;
                for (std::uint32_t k = out_begin_[s]; k < out_begin_[s + 1]; ++k) {
                    const std::uint32_t p = out_patterns_[k];
                    on_match(std::size_t{p}, i + 1 - lengths_[p]);
                }
            }
        }
    }

  private:
    static constexpr std::uint32_t kMatchBit = 0x80000000u;
    static constexpr std::uint32_t kStateMask = 0x7FFFFFFFu;

    std::vector<Pattern> patterns_;
    std::vector<std::size_t> lengths_;
    // Sparse trie edges, sorted by byte.
    std::vector<std::vector<std::pair<Byte, State>>> trie_;
    std::vector<State> failure_;
    std::vector<std::uint32_t> out_begin_;
    std::vector<std::uint32_t> out_patterns_;
    // Entry = next_state * 256, with kMatchBit set when next_state has output.
    std::vector<std::uint32_t> delta_;
};

Automaton ac_build(std::vector<Pattern> patterns);
std::vector<Occurrence> ac_find_all(const Automaton& automaton, ByteView text);

}  // namespace carve
