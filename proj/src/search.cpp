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

#include "carve/search.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace carve {

std::string_view to_string(Role role) noexcept {
    return role == Role::header ? "header" : "footer";
}

namespace {

void require_non_empty(const Pattern& pattern) {
    if (pattern.bytes.empty())
        throw std::invalid_argument("empty search pattern '" + pattern.id.name + "'");
}

// suffix[i] = length of the longest substring ending at i that is also a
// suffix of the pattern.
std::vector<std::size_t> suffix_lengths(ByteView p) {
    const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(p.size());
    std::vector<std::size_t> suff(p.size());
    suff[m - 1] = static_cast<std::size_t>(m);
    std::ptrdiff_t g = m - 1;
    std::ptrdiff_t f = m - 1;
    for (std::ptrdiff_t i = m - 2; i >= 0; --i) {
        if (i > g && static_cast<std::ptrdiff_t>(suff[i + m - 1 - f]) < i - g) {
            suff[i] = suff[i + m - 1 - f];
        } else {
            if (i < g) g = i;
            f = i;
            while (g >= 0 && p[g] == p[g + m - 1 - f]) --g;
            suff[i] = static_cast<std::size_t>(f - g);
        }
    }
    return suff;
}

}  // namespace

std::vector<Occurrence> brute_force_find_all(const Pattern& pattern, ByteView text) {
    require_non_empty(pattern);
    std::vector<Occurrence> out;
    brute_force_for_each(pattern.bytes, text,
                         [&](std::size_t offset) { out.push_back({pattern.id, offset}); });
    return out;
}

KmpTable::KmpTable(Pattern pattern) : pattern_(std::move(pattern)) {
    require_non_empty(pattern_);
    const Bytes& p = pattern_.bytes;
    prefix_.assign(p.size(), 0);
    std::size_t k = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
        while (k > 0 && p[k] != p[i]) k = prefix_[k - 1];
        if (p[k] == p[i]) ++k;
        prefix_[i] = k;
    }
}

KmpTable kmp_build(const Pattern& pattern) { return KmpTable(pattern); }

std::vector<Occurrence> kmp_find_all(const KmpTable& table, ByteView text) {
    std::vector<Occurrence> out;
    table.for_each_match(text, [&](std::size_t offset) { out.push_back({table.pattern().id, offset}); });
    return out;
}

BmTables::BmTables(Pattern pattern) : pattern_(std::move(pattern)) {
    require_non_empty(pattern_);
    const Bytes& p = pattern_.bytes;
    const std::size_t m = p.size();

    bad_char_.fill(m);
    for (std::size_t i = 0; i + 1 < m; ++i) bad_char_[p[i]] = m - 1 - i;

    const auto suff = suffix_lengths(p);
    good_suffix_.assign(m, m);
    std::size_t j = 0;
    for (std::size_t r = m; r-- > 0;) {
        if (suff[r] == r + 1) {
            for (; j < m - 1 - r; ++j) {
                if (good_suffix_[j] == m) good_suffix_[j] = m - 1 - r;
            }
        }
    }
    for (std::size_t i = 0; i + 1 < m; ++i) good_suffix_[m - 1 - suff[i]] = m - 1 - i;
}

BmTables bm_build(const Pattern& pattern) { return BmTables(pattern); }

std::vector<Occurrence> bm_find_all(const BmTables& tables, ByteView text) {
    std::vector<Occurrence> out;
    tables.for_each_match(text, [&](std::size_t offset) { out.push_back({tables.pattern().id, offset}); });
    return out;
}

Automaton::Automaton(std::vector<Pattern> patterns) : patterns_(std::move(patterns)) {
    if (patterns_.empty()) throw std::invalid_argument("automaton needs at least one pattern");
    for (const auto& p : patterns_) require_non_empty(p);

    // Goto function: keyword trie, states numbered in insertion order.
    trie_.emplace_back();
    std::vector<std::vector<std::size_t>> outputs(1);
    auto child = [this](State s, Byte b) -> std::optional<State> {
        const auto& edges = trie_[s];
        auto it = std::lower_bound(edges.begin(), edges.end(), b,
                                   [](const auto& e, Byte v) { return e.first < v; });
        if (it != edges.end() && it->first == b) return it->second;
        return std::nullopt;
    };
    for (std::size_t idx = 0; idx < patterns_.size(); ++idx) {
        const auto& bytes = patterns_[idx].bytes;
        lengths_.push_back(bytes.size());
        State s = 0;
        for (Byte b : bytes) {
            if (auto next = child(s, b)) {
                s = *next;
                continue;
            }
            const auto fresh = static_cast<State>(trie_.size());
            auto& edges = trie_[s];
            auto it = std::lower_bound(edges.begin(), edges.end(), b,
                                       [](const auto& e, Byte v) { return e.first < v; });
            edges.insert(it, {b, fresh});
            trie_.emplace_back();
            outputs.emplace_back();
            s = fresh;
        }
        outputs[s].push_back(idx);
    }

    const std::size_t states = trie_.size();
    if (states >= (std::size_t{1} << 23)) throw std::length_error("automaton too large");

    // Failure function, breadth first, merging outputs along the chain.
    failure_.assign(states, 0);
    std::vector<State> order;
    order.reserve(states);
    std::deque<State> queue;
    for (const auto& [b, s] : trie_[0]) queue.push_back(s);
    while (!queue.empty()) {
        const State r = queue.front();
        queue.pop_front();
        order.push_back(r);
        for (const auto& [b, s] : trie_[r]) {
            queue.push_back(s);
            State f = failure_[r];
            while (f != 0 && !child(f, b)) f = failure_[f];
            const auto target = child(f, b);
            failure_[s] = target && *target != s ? *target : 0;
            const auto& inherited = outputs[failure_[s]];
            outputs[s].insert(outputs[s].end(), inherited.begin(), inherited.end());
        }
    }

    out_begin_.reserve(states + 1);
    for (State s = 0; s < states; ++s) {
        out_begin_.push_back(static_cast<std::uint32_t>(out_patterns_.size()));
        for (auto p : outputs[s]) out_patterns_.push_back(static_cast<std::uint32_t>(p));
    }
    out_begin_.push_back(static_cast<std::uint32_t>(out_patterns_.size()));

    auto encode = [&](State s) {
        std::uint32_t e = s << 8;
        if (out_begin_[s] != out_begin_[s + 1]) e |= kMatchBit;
        return e;
    };
    delta_.assign(states * 256, 0);
    for (unsigned b = 0; b < 256; ++b) delta_[b] = encode(child(0, static_cast<Byte>(b)).value_or(0));
    for (State r : order) {
        for (unsigned b = 0; b < 256; ++b) {
            const auto via_goto = child(r, static_cast<Byte>(b));
            delta_[(std::size_t{r} << 8) | b] =
                via_goto ? encode(*via_goto) : delta_[(std::size_t{failure_[r]} << 8) | b];
        }
    }
}

std::optional<Automaton::State> Automaton::goto_fn(State state, Byte b) const {
    const auto& edges = trie_.at(state);
    for (const auto& [eb, s] : edges) {
        if (eb == b) return s;
    }
    if (state == 0) return 0;
    return std::nullopt;
}

std::vector<std::size_t> Automaton::output_fn(State state) const {
    if (state >= state_count()) throw std::out_of_range("no such automaton state");
    return {out_patterns_.begin() + out_begin_[state], out_patterns_.begin() + out_begin_[state + 1]};
}

Automaton ac_build(std::vector<Pattern> patterns) { return Automaton(std::move(patterns)); }

std::vector<Occurrence> ac_find_all(const Automaton& automaton, ByteView text) {
    std::vector<Occurrence> out;
    automaton.for_each_match(text, [&](std::size_t p, std::size_t offset) {
        out.push_back({automaton.patterns()[p].id, offset});
    });
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace carve
