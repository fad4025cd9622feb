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

#include <gtest/gtest.h>

#include "carve/corpus.hpp"
#include "carve/digest.hpp"
#include "carve/error.hpp"
#include "test_util.hpp"

namespace carve {
namespace {

using testing::reference_scan;

GenerateOptions opts(std::size_t files, std::uint64_t len, std::uint64_t seed, std::uint64_t lo = 256,
                     std::uint64_t hi = 4096) {
    GenerateOptions o;
    o.file_count = files;
    o.image_length = len;
    o.seed = seed;
    o.min_file_size = lo;
    o.max_file_size = hi;
    return o;
}

MatchSet expected_events(const GroundTruth& truth, const SignatureSet& sigs) {
    MatchSet ms;
    for (const auto& p : truth.planted) {
        const auto* sig = sigs.find(p.signature_id);
        ms.events.push_back({p.signature_id, Role::header, p.start});
        if (sig->footer) ms.events.push_back({p.signature_id, Role::footer, p.end - sig->footer->size()});
    }
    for (const auto& d : truth.decoys) ms.events.push_back({d.signature_id, d.role, d.offset});
    std::sort(ms.events.begin(), ms.events.end(), event_less);
    return ms;
}

TEST(Rng, BelowStaysInRangeAndIsDeterministic) {
    Rng a(1), b(1);
    for (int i = 0; i < 1000; ++i) {
        const auto bound = 1 + (a.next() % 1000);
        EXPECT_EQ(bound, 1 + (b.next() % 1000));
        const auto v = a.below(bound);
        EXPECT_EQ(v, b.below(bound));
        EXPECT_LT(v, bound);
    }
    EXPECT_THROW(a.below(0), std::invalid_argument);
    Bytes x(13), y(13);
    Rng c(9), d(9);
    c.fill(x);
    d.fill(y);
    EXPECT_EQ(x, y);
}

TEST(Rng, MatchesMersenneTwisterReferenceOutput) {
    // The standard pins the 10000th output of a default-seeded mt19937_64.
    Rng r(5489u);
    std::uint64_t v = 0;
    for (int i = 0; i < 10000; ++i) v = r.next();
    EXPECT_EQ(v, 9981545732273789042ull);
}

TEST(GenerateImage, SingleSmallJpeg) {
    const auto sigs = builtin_paper_set().select({"jpeg"});
    const auto g = generate_image(sigs, opts(1, 16, 3, 6, 6));
    ASSERT_EQ(g.image.size(), 16u);
    ASSERT_EQ(g.truth.planted.size(), 1u);
    const auto& p = g.truth.planted[0];
    EXPECT_EQ(p.signature_id, "jpeg");
    EXPECT_EQ(p.end - p.start, 6u);
    EXPECT_EQ(g.image[p.start], 0xFF);
    EXPECT_EQ(g.image[p.start + 1], 0xD8);
    EXPECT_EQ(g.image[p.start + 4], 0xFF);
    EXPECT_EQ(g.image[p.start + 5], 0xD9);
    EXPECT_EQ(reference_scan(g.image, sigs), expected_events(g.truth, sigs));
}

TEST(GenerateImage, ZeroFilesIsAllFiller) {
    const auto sigs = builtin_paper_set();
    const auto g = generate_image(sigs, opts(0, 200000, 1));
    EXPECT_EQ(g.image.size(), 200000u);
    EXPECT_TRUE(g.truth.planted.empty());
    EXPECT_TRUE(reference_scan(g.image, sigs).events.empty());
    EXPECT_EQ(g.truth.image_sha256, sha256_hex(g.image));
}

TEST(GenerateImage, DeterministicForSeed) {
    const auto sigs = builtin_paper_set();
    const auto a = generate_image(sigs, opts(50, 1 << 20, 42));
    const auto b = generate_image(sigs, opts(50, 1 << 20, 42));
    EXPECT_EQ(a.image, b.image);
    EXPECT_EQ(a.truth, b.truth);
    const auto c = generate_image(sigs, opts(50, 1 << 20, 43));
    EXPECT_NE(a.image, c.image);
}

TEST(GenerateImage, InfeasiblePackingThrows) {
    const auto sigs = builtin_paper_set();
    EXPECT_THROW(generate_image(sigs, opts(1000, 1024, 1)), InfeasibleError);
    EXPECT_THROW(generate_image(sigs, opts(2, 100, 1, 6, 50)), InfeasibleError);
    EXPECT_NO_THROW(generate_image(sigs, opts(2, 101, 1, 6, 50)));
    // No signature fits in 1-byte files.
    EXPECT_THROW(generate_image(sigs, opts(1, 100, 1, 1, 1)), InfeasibleError);
}

TEST(GenerateImage, PlantedFilesAreDisjointAndWellFormed) {
    for (const auto& sigs : {builtin_paper_set(), builtin_canonical_set()}) {
        const auto g = generate_image(sigs, opts(60, 1 << 20, 5));
        ASSERT_EQ(g.truth.planted.size(), 60u);
        for (std::size_t i = 0; i < g.truth.planted.size(); ++i) {
            const auto& p = g.truth.planted[i];
            if (i > 0) EXPECT_LT(g.truth.planted[i - 1].end, p.start);
            const auto* sig = sigs.find(p.signature_id);
            ASSERT_NE(sig, nullptr);
            EXPECT_TRUE(std::equal(sig->header.begin(), sig->header.end(), g.image.begin() + p.start));
            if (sig->footer)
                EXPECT_TRUE(std::equal(sig->footer->begin(), sig->footer->end(),
                                       g.image.begin() + p.end - sig->footer->size()));
            EXPECT_GE(p.end - p.start, 256u);
            EXPECT_LE(p.end - p.start, 4096u);
        }
        // Sanitised: the scan sees exactly the planted components.
        EXPECT_EQ(reference_scan(g.image, sigs), expected_events(g.truth, sigs));
    }
}

TEST(GenerateImage, AdversarialDecoysSurviveSanitising) {
    const auto sigs = builtin_paper_set();
    auto o = opts(20, 1 << 19, 8);
    o.adversarial = true;
    const auto g = generate_image(sigs, o);
    EXPECT_EQ(g.truth.filler_policy, "adversarial");
    EXPECT_FALSE(g.truth.decoys.empty());
    EXPECT_EQ(reference_scan(g.image, sigs), expected_events(g.truth, sigs));
}

CarveManifest manifest_from(const GroundTruth& truth, const std::vector<PlantedFile>& regions) {
    CarveManifest m;
    m.image = {"img", truth.image_length, truth.image_sha256};
    for (const auto& r : regions)
        m.entries.push_back({{r.signature_id, r.start, r.end, CarveMethod::header_footer, Validation::not_applicable},
                             std::nullopt, std::nullopt});
    return m;
}

TEST(Evaluate, PerfectCarve) {
    const auto g = generate_image(builtin_paper_set(), opts(50, 1 << 20, 2));
    const auto r = evaluate(g.truth, manifest_from(g.truth, g.truth.planted));
    EXPECT_EQ(r.exact, 50u);
    EXPECT_DOUBLE_EQ(r.precision, 1.0);
    EXPECT_DOUBLE_EQ(r.recall, 1.0);
}

TEST(Evaluate, EmptyCarveUsesZeroOverZeroConvention) {
    GroundTruth t;
    t.image_length = 1000;
    for (int i = 0; i < 50; ++i) t.planted.push_back({"jpeg", static_cast<std::uint64_t>(i * 10), static_cast<std::uint64_t>(i * 10 + 5)});
    const auto r = evaluate(t, manifest_from(t, {}));
    EXPECT_DOUBLE_EQ(r.precision, 1.0);
    EXPECT_DOUBLE_EQ(r.recall, 0.0);
}

TEST(Evaluate, SpuriousAndPartialRegions) {
    GroundTruth t;
    t.image_length = 10000;
    std::vector<PlantedFile> carved;
    for (int i = 0; i < 50; ++i) {
        t.planted.push_back({"jpeg", static_cast<std::uint64_t>(i * 100), static_cast<std::uint64_t>(i * 100 + 50)});
        carved.push_back(t.planted.back());
    }
    for (int i = 0; i < 5; ++i) carved.push_back({"pdf", static_cast<std::uint64_t>(i * 100 + 60), static_cast<std::uint64_t>(i * 100 + 70)});
    auto r = evaluate(t, manifest_from(t, carved));
    EXPECT_EQ(r.exact, 50u);
    EXPECT_NEAR(r.precision, 50.0 / 55.0, 1e-12);
    EXPECT_DOUBLE_EQ(r.recall, 1.0);

    carved = {{"jpeg", 0, 49}, {"jpeg", 100, 150}};
    r = evaluate(t, manifest_from(t, carved));
    EXPECT_EQ(r.exact, 1u);
    EXPECT_EQ(r.partial, 1u);
}

TEST(Evaluate, ImageMismatchThrows) {
    GroundTruth t;
    t.image_length = 100;
    t.image_sha256 = std::string(64, 'a');
    auto m = manifest_from(t, {});
    m.image.length = 101;
    EXPECT_THROW(evaluate(t, m), ValidationError);
    m.image.length = 100;
    m.image.sha256 = std::string(64, 'b');
    EXPECT_THROW(evaluate(t, m), ValidationError);
}

TEST(GroundTruthFile, RoundTrips) {
    auto o = opts(10, 1 << 18, 4);
    o.adversarial = true;
    const auto g = generate_image(builtin_canonical_set(), o);
    const auto text = format_truth(g.truth);
    EXPECT_EQ(parse_truth(text), g.truth);
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "{\"image_length\":262144,\"seed\":4,\"image_sha256\":\"" + g.truth.image_sha256 +
                  "\",\"filler\":\"adversarial\"}");
    EXPECT_THROW(parse_truth(""), ParseError);
}

TEST(RoundTrip, FooterlessSignatureScoresPartial) {
    // PST has no footer; the max-size fallback runs past the planted end.
    const auto sigs = builtin_paper_set().select({"pst"});
    const auto g = generate_image(sigs, opts(5, 1 << 18, 6));
    const MemorySource src(g.image);
    auto regions = pair_matches(scan(src, sigs, {Backend::ac, 1, 4096}), sigs, g.image.size());
    CarveManifest m;
    m.image = {"img", g.truth.image_length, g.truth.image_sha256};
    for (auto& r : regions) m.entries.push_back({r, std::nullopt, std::nullopt});
    const auto rep = evaluate(g.truth, m);
    EXPECT_EQ(rep.carved, 5u);
    EXPECT_EQ(rep.exact + rep.partial, 5u);
    EXPECT_EQ(rep.exact, 0u);
}

TEST(RoundTrip, FooteredFilesScorePerfect) {
    for (const auto& sigs : {builtin_paper_set().select({"jpeg", "gif", "zip", "pdf"}),
                             builtin_canonical_set().select({"jpeg", "gif", "zip", "pdf"})}) {
        const auto g = generate_image(sigs, opts(50, 1 << 21, 12));
        const MemorySource src(g.image);
        auto regions = pair_matches(scan(src, sigs, {Backend::ac, 2, 65536}), sigs, g.image.size());
        CarveManifest m;
        m.image = {"img", g.truth.image_length, g.truth.image_sha256};
        for (auto& r : regions) m.entries.push_back({r, std::nullopt, std::nullopt});
        const auto rep = evaluate(g.truth, m);
        EXPECT_DOUBLE_EQ(rep.precision, 1.0);
        EXPECT_DOUBLE_EQ(rep.recall, 1.0);
    }
}

}  // namespace
}  // namespace carve
