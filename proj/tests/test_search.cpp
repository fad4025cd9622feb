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

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include <gtest/gtest.h>

#include "carve/search.hpp"
#include "test_util.hpp"

namespace carve {
namespace {

using testing::random_bytes;

Pattern pat(std::string_view s, Role role = Role::header) { return {{std::string(s), role}, to_bytes(s)}; }

std::vector<std::size_t> offsets(const std::vector<Occurrence>& occ) {
    std::vector<std::size_t> out;
    for (const auto& o : occ) out.push_back(o.offset);
    return out;
}

// Longest proper prefix of p[0..i] that is also its suffix, by trying every
// length.
std::vector<std::size_t> naive_prefix_function(std::string_view p) {
    std::vector<std::size_t> out(p.size(), 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t len = i; len > 0; --len) {
            if (p.substr(0, len) == p.substr(i + 1 - len, len)) {
                out[i] = len;
                break;
            }
        }
    }
    return out;
}

// Distance from the last occurrence of b in p[0..m-2] to the end, else m.
std::size_t naive_bad_character(std::string_view p, char b) {
    for (std::size_t i = p.size() - 1; i-- > 0;) {
        if (p[i] == b) return p.size() - 1 - i;
    }
    return p.size();
}

TEST(BruteForce, Examples) {
    EXPECT_EQ(offsets(brute_force_find_all(pat("aaa"), as_view("aaaaa"))), (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_TRUE(brute_force_find_all(pat("he"), as_view("")).empty());
    EXPECT_EQ(offsets(brute_force_find_all(pat("he"), as_view("ushers"))), (std::vector<std::size_t>{2}));
    EXPECT_TRUE(brute_force_find_all(pat("longer"), as_view("long")).empty());
}

TEST(Search, EmptyPatternIsInvalidArgument) {
    const Pattern empty{{"e", Role::header}, {}};
    EXPECT_THROW(brute_force_find_all(empty, as_view("abc")), std::invalid_argument);
    EXPECT_THROW(kmp_build(empty), std::invalid_argument);
    EXPECT_THROW(bm_build(empty), std::invalid_argument);
    EXPECT_THROW(ac_build({}), std::invalid_argument);
    EXPECT_THROW(ac_build({pat("a"), empty}), std::invalid_argument);
}

TEST(Kmp, PrefixFunctionExamples) {
    EXPECT_EQ(kmp_build(pat("aaaa")).prefix_function(), (std::vector<std::size_t>{0, 1, 2, 3}));
    EXPECT_EQ(kmp_build(pat("abcd")).prefix_function(), (std::vector<std::size_t>{0, 0, 0, 0}));
    const auto hers = naive_prefix_function("hers");
    EXPECT_EQ(hers, (std::vector<std::size_t>{0, 0, 0, 0}));
    EXPECT_EQ(kmp_build(pat("hers")).prefix_function(), hers);
}

TEST(Kmp, PrefixFunctionMatchesNaiveDefinition) {
    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 500; ++iter) {
        std::string p(1 + rng() % 20, 'a');
        for (auto& c : p) c = static_cast<char>('a' + rng() % 3);
        const auto table = kmp_build(pat(p));
        EXPECT_EQ(table.prefix_function(), naive_prefix_function(p)) << p;
        EXPECT_EQ(table.prefix_function()[0], 0u);
        for (std::size_t i = 0; i < p.size(); ++i) EXPECT_LT(table.prefix_function()[i], i + 1);
    }
}

TEST(Kmp, FindAllExamples) {
    const auto text = as_view("ushers");
    EXPECT_EQ(offsets(kmp_find_all(kmp_build(pat("she")), text)), offsets(brute_force_find_all(pat("she"), text)));
    EXPECT_EQ(offsets(kmp_find_all(kmp_build(pat("she")), text)), (std::vector<std::size_t>{1}));
    EXPECT_TRUE(kmp_find_all(kmp_build(pat("x")), text).empty());
    EXPECT_EQ(offsets(kmp_find_all(kmp_build(pat("ushers")), text)), (std::vector<std::size_t>{0}));
}

TEST(BoyerMoore, BadCharacterExamples) {
    const auto abc = bm_build(pat("abc"));
    EXPECT_EQ(abc.bad_character_shift('a'), naive_bad_character("abc", 'a'));
    EXPECT_EQ(abc.bad_character_shift('b'), naive_bad_character("abc", 'b'));
    EXPECT_EQ(abc.bad_character_shift('a'), 2u);
    EXPECT_EQ(abc.bad_character_shift('b'), 1u);
    EXPECT_EQ(abc.bad_character_shift('c'), 3u);
    EXPECT_EQ(abc.bad_character_shift('z'), 3u);

    EXPECT_EQ(bm_build(pat("aaa")).bad_character_shift('z'), 3u);

    const auto one = bm_build(pat("a"));
    for (int b = 0; b < 256; ++b) EXPECT_EQ(one.bad_character_shift(static_cast<Byte>(b)), 1u);
    EXPECT_EQ(one.good_suffix_shift(), (std::vector<std::size_t>{1}));
}

TEST(BoyerMoore, ShiftsStayWithinPatternLength) {
    std::mt19937_64 rng(12);
    for (int iter = 0; iter < 500; ++iter) {
        Pattern p{{"p", Role::header}, random_bytes(rng, 1 + rng() % 16, 1 + rng() % 4)};
        const auto t = bm_build(p);
        const std::size_t m = p.bytes.size();
        for (int b = 0; b < 256; ++b) {
            const auto s = t.bad_character_shift(static_cast<Byte>(b));
            EXPECT_GE(s, 1u);
            EXPECT_LE(s, m);
            if (std::find(p.bytes.begin(), p.bytes.end(), b) == p.bytes.end()) EXPECT_EQ(s, m);
        }
        ASSERT_EQ(t.good_suffix_shift().size(), m);
        for (auto s : t.good_suffix_shift()) {
            EXPECT_GE(s, 1u);
            EXPECT_LE(s, m);
        }
    }
}

TEST(BoyerMoore, FindAllExamples) {
    const auto text = as_view("HERE IS A SIMPLE EXAMPLE");
    const auto expected = offsets(brute_force_find_all(pat("EXAMPLE"), text));
    EXPECT_EQ(expected, (std::vector<std::size_t>{17}));
    EXPECT_EQ(offsets(bm_find_all(bm_build(pat("EXAMPLE")), text)), expected);

    const Bytes zeros(4096, 0);
    EXPECT_TRUE(bm_find_all(bm_build({{"jpeg", Role::footer}, {0xFF, 0xD9}}), zeros).empty());

    EXPECT_EQ(offsets(bm_find_all(bm_build(pat("aa")), as_view("aaa"))), (std::vector<std::size_t>{0, 1}));
}

TEST(BoyerMoore, ComparesRightToLeft) {
    // The first byte inspected in each alignment is the one under the
    // pattern's last position.
    const auto text = as_view("xxxxabcd");
    const auto t = bm_build(pat("abcd"));
    CountingProbe probe;
    t.for_each_match(text, [](std::size_t) {}, probe);
    // Alignment 0: 'x' vs 'd' mismatch (1 read), absent byte shifts by 4;
    // alignment 4 matches with 4 reads.
    EXPECT_EQ(probe.reads, 5u);
}

std::vector<std::string> names(const Automaton& a, const std::vector<std::size_t>& idx) {
    std::vector<std::string> out;
    for (auto i : idx) out.push_back(a.patterns()[i].id.name);
    std::sort(out.begin(), out.end());
    return out;
}

Automaton::State walk(const Automaton& a, std::string_view s) {
    Automaton::State state = 0;
    for (char c : s) {
        auto next = a.goto_fn(state, static_cast<Byte>(c));
        EXPECT_TRUE(next.has_value()) << s;
        if (!next) return 0;
        state = *next;
    }
    return state;
}

TEST(AhoCorasick, HeSheHisHersGotoFunction) {
    const auto a = ac_build({pat("he"), pat("she"), pat("his"), pat("hers")});
    EXPECT_EQ(a.state_count(), 10u);

    EXPECT_EQ(*a.goto_fn(0, 'h'), 1u);
    EXPECT_EQ(*a.goto_fn(1, 'e'), 2u);
    EXPECT_EQ(*a.goto_fn(0, 's'), 3u);
    EXPECT_EQ(*a.goto_fn(3, 'h'), 4u);
    EXPECT_EQ(*a.goto_fn(4, 'e'), 5u);
    EXPECT_EQ(*a.goto_fn(1, 'i'), 6u);
    EXPECT_EQ(*a.goto_fn(6, 's'), 7u);
    EXPECT_EQ(*a.goto_fn(2, 'r'), 8u);
    EXPECT_EQ(*a.goto_fn(8, 's'), 9u);
    EXPECT_EQ(*a.goto_fn(0, 'x'), 0u);
    EXPECT_FALSE(a.goto_fn(1, 'x').has_value());

    EXPECT_EQ(walk(a, "he"), 2u);
    EXPECT_EQ(walk(a, "she"), 5u);
    EXPECT_EQ(walk(a, "his"), 7u);
    EXPECT_EQ(walk(a, "hers"), 9u);

    std::set<Automaton::State> with_output;
    for (Automaton::State s = 0; s < a.state_count(); ++s) {
        if (!a.output_fn(s).empty()) with_output.insert(s);
    }
    EXPECT_EQ(with_output, (std::set<Automaton::State>{2, 5, 7, 9}));
    EXPECT_EQ(names(a, a.output_fn(2)), (std::vector<std::string>{"he"}));
    EXPECT_EQ(names(a, a.output_fn(5)), (std::vector<std::string>{"he", "she"}));
    EXPECT_EQ(names(a, a.output_fn(7)), (std::vector<std::string>{"his"}));
    EXPECT_EQ(names(a, a.output_fn(9)), (std::vector<std::string>{"hers"}));
}

// Failure target = state spelling the longest proper suffix of the state's
// string that is also a trie path, found by trying every suffix.
TEST(AhoCorasick, FailureFunctionMatchesLongestSuffixDefinition) {
    std::mt19937_64 rng(13);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<Pattern> patterns;
        std::vector<std::string> words;
        const int count = 1 + static_cast<int>(rng() % 6);
        for (int k = 0; k < count; ++k) {
            std::string w(1 + rng() % 6, 'a');
            for (auto& c : w) c = static_cast<char>('a' + rng() % 3);
            words.push_back(w);
            patterns.push_back(pat(w));
        }
        const auto a = ac_build(patterns);

        std::map<std::string, Automaton::State> prefixes{{"", 0}};
        for (const auto& w : words) {
            for (std::size_t len = 1; len <= w.size(); ++len) prefixes[w.substr(0, len)] = walk(a, w.substr(0, len));
        }
        ASSERT_EQ(prefixes.size(), a.state_count());
        for (const auto& [str, state] : prefixes) {
            if (str.empty()) continue;
            std::string best;
            for (std::size_t len = str.size() - 1; len > 0; --len) {
                if (prefixes.count(str.substr(str.size() - len))) {
                    best = str.substr(str.size() - len);
                    break;
                }
            }
            EXPECT_EQ(a.failure_fn(state), prefixes[best]) << str;

            // Output = every keyword that is a suffix of the state's string.
            std::vector<std::string> expect;
            for (const auto& w : words) {
                if (w.size() <= str.size() && str.compare(str.size() - w.size(), w.size(), w) == 0)
                    expect.push_back(w);
            }
            std::sort(expect.begin(), expect.end());
            EXPECT_EQ(names(a, a.output_fn(state)), expect) << str;
        }
    }
}

TEST(AhoCorasick, GotoTreeIsRootedAndAcyclic) {
    const auto a = ac_build({pat("he"), pat("she"), pat("his"), pat("hers"), pat("hi")});
    std::vector<int> parents(a.state_count(), 0);
    for (Automaton::State s = 0; s < a.state_count(); ++s) {
        for (int b = 0; b < 256; ++b) {
            auto t = a.goto_fn(s, static_cast<Byte>(b));
            if (t && !(s == 0 && *t == 0)) {
                EXPECT_GT(*t, 0u);
                ++parents[*t];
            }
        }
    }
    EXPECT_EQ(parents[0], 0);
    for (std::size_t s = 1; s < parents.size(); ++s) EXPECT_EQ(parents[s], 1) << s;
}

TEST(AhoCorasick, SinglePatternAndDuplicates) {
    const auto one = ac_build({pat("a")});
    EXPECT_EQ(one.state_count(), 2u);
    EXPECT_EQ(one.output_fn(1), (std::vector<std::size_t>{0}));
    EXPECT_EQ(one.failure_fn(1), 0u);

    const auto dup = ac_build({pat("ab"), {{"other", Role::footer}, to_bytes("ab")}});
    EXPECT_EQ(dup.state_count(), 3u);
    auto out = dup.output_fn(2);
    std::sort(out.begin(), out.end());
    EXPECT_EQ(out, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(ac_find_all(dup, as_view("xab")).size(), 2u);
}

TEST(AhoCorasick, FindAllExamples) {
    const std::vector<Pattern> keywords{pat("he"), pat("she"), pat("his"), pat("hers")};
    const auto a = ac_build(keywords);
    const auto text = as_view("ushers");

    std::vector<Occurrence> oracle;
    for (const auto& p : keywords) {
        auto o = brute_force_find_all(p, text);
        oracle.insert(oracle.end(), o.begin(), o.end());
    }
    std::sort(oracle.begin(), oracle.end());
    const std::vector<Occurrence> expected{{{"he", Role::header}, 2}, {{"hers", Role::header}, 2}, {{"she", Role::header}, 1}};
    auto sorted_expected = expected;
    std::sort(sorted_expected.begin(), sorted_expected.end());
    EXPECT_EQ(oracle, sorted_expected);
    EXPECT_EQ(ac_find_all(a, text), oracle);

    EXPECT_TRUE(ac_find_all(a, as_view("")).empty());
    EXPECT_EQ(offsets(ac_find_all(ac_build({pat("aa")}), as_view("aaaa"))), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(AhoCorasick, NextStateResolvesFailures) {
    const auto a = ac_build({pat("he"), pat("she"), pat("his"), pat("hers")});
    // "sh" then 'i' falls back through state 1 ("h") to "hi".
    EXPECT_EQ(a.next_state(4, 'i'), 6u);
    EXPECT_EQ(a.next_state(0, 'z'), 0u);
    EXPECT_EQ(a.next_state(5, 'r'), 8u);
}

std::vector<Occurrence> sorted(std::vector<Occurrence> v) {
    std::sort(v.begin(), v.end());
    return v;
}

// Random instances across both alphabet extremes; every backend must agree
// with the naive scan.
TEST(SearchProperties, BackendsMatchBruteForce) {
    std::mt19937_64 rng(0xC0FFEE);
    for (int iter = 0; iter < 300; ++iter) {
        const unsigned alphabet = iter % 2 == 0 ? 2 : 256;
        const Bytes text = random_bytes(rng, rng() % 4097, alphabet);
        std::vector<Pattern> patterns;
        const int count = 1 + static_cast<int>(rng() % 8);
        for (int k = 0; k < count; ++k) {
            Bytes bytes = random_bytes(rng, 1 + rng() % 16, alphabet);
            // Plant some patterns so matches are not all empty for 256.
            if (!text.empty() && rng() % 2) {
                const auto at = rng() % text.size();
                const auto len = std::min<std::size_t>(bytes.size(), text.size() - at);
                bytes.assign(text.begin() + static_cast<std::ptrdiff_t>(at),
                             text.begin() + static_cast<std::ptrdiff_t>(at + len));
            }
            patterns.push_back({{"p" + std::to_string(k), Role::header}, bytes});
        }

        std::vector<Occurrence> oracle;
        std::vector<Occurrence> bm_union;
        for (const auto& p : patterns) {
            const auto expect = brute_force_find_all(p, text);
            EXPECT_EQ(kmp_find_all(kmp_build(p), text), expect);
            const auto bm = bm_find_all(bm_build(p), text);
            EXPECT_EQ(bm, expect);
            oracle.insert(oracle.end(), expect.begin(), expect.end());
            bm_union.insert(bm_union.end(), bm.begin(), bm.end());
        }
        const auto ac = ac_find_all(ac_build(patterns), text);
        EXPECT_EQ(ac, sorted(oracle));
        EXPECT_EQ(ac, sorted(bm_union));
    }
}

TEST(SearchProperties, AcReadsEachByteOnce) {
    std::mt19937_64 rng(21);
    const Bytes text = random_bytes(rng, 100000);
    for (int count : {1, 3, 8}) {
        std::vector<Pattern> patterns;
        for (int k = 0; k < count; ++k) patterns.push_back({{"p" + std::to_string(k), Role::header}, random_bytes(rng, 2 + k)});
        CountingProbe probe;
        ac_build(patterns).for_each_match(text, [](std::size_t, std::size_t) {}, probe);
        EXPECT_EQ(probe.reads, text.size());
    }
}

TEST(SearchProperties, BoyerMooreIsSublinearOnAbsentPattern) {
    std::mt19937_64 rng(22);
    const Bytes text = random_bytes(rng, 1 << 20);
    Pattern p{{"p", Role::header}, random_bytes(rng, 7)};
    while (!brute_force_find_all(p, text).empty()) p.bytes = random_bytes(rng, 7);
    CountingProbe probe;
    bm_build(p).for_each_match(text, [](std::size_t) {}, probe);
    EXPECT_LT(probe.reads, text.size());
}

}  // namespace
}  // namespace carve
