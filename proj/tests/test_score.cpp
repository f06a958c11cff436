// Copyright 2026 The seizeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"
#include "support.hpp"

#include "seizeval/score.hpp"

#include <sstream>

using namespace seizeval;

namespace {

Annotation ann(const char* file, double a, double b) { return {"s1", file, Event(a, b)}; }

}  // namespace

TEST_CASE("identical annotations score perfectly")
{
    const std::vector<Annotation> ref{ann("f1", 100, 160), ann("f1", 900, 950), ann("f2", 10, 70)};
    const auto r = score_annotations(ref, ref, {}, 3600.0, 256.0, Aggregation::pooled);
    CHECK(r.sensitivity_ep == 1.0);
    CHECK(r.precision_ep == 1.0);
    CHECK(r.f1_dur == 1.0);
    CHECK(r.far_per_day == 0.0);
    CHECK(r.test_duration_s == 7200.0);
    CHECK(r.counts_ep.tp == 3);
}

TEST_CASE("disjoint hypothesis misses everything")
{
    const std::vector<Annotation> ref{ann("f1", 100, 160)};
    const std::vector<Annotation> hyp{ann("f1", 200, 260)};
    const auto r = score_annotations(ref, hyp, {}, 3600.0, 1.0, Aggregation::pooled);
    CHECK(r.sensitivity_ep == 0.0);
    CHECK(r.precision_ep == 0.0);
    CHECK(r.counts_ep.fp == 1);
    CHECK(r.far_per_day == doctest::Approx(24.0));
}

TEST_CASE("one of two seizures found with one false alarm")
{
    const std::vector<Annotation> ref{ann("f1", 100, 200), ann("f1", 1000, 1100)};
    const std::vector<Annotation> hyp{ann("f1", 150, 250), ann("f1", 2000, 2100)};
    const auto r = score_annotations(ref, hyp, {}, 3600.0, 1.0, Aggregation::pooled);
    CHECK(r.sensitivity_ep == 0.5);
    CHECK(r.precision_ep == 0.5);
    CHECK(r.f1_ep == 0.5);
    CHECK(r.counts_dur.tp == 50);
    CHECK(r.counts_dur.fp == 150);
}

TEST_CASE("file spans bound the events")
{
    const std::vector<Annotation> ref{ann("f1", 100, 160)};
    const std::vector<FileSpan> spans{{"s1", "f1", 120.0}};
    CHECK(error_kind([&] { score_annotations(ref, ref, spans, std::nullopt, 1.0, Aggregation::pooled); }) ==
          ErrorKind::alignment);
    const std::vector<FileSpan> other{{"s1", "f9", 1000.0}};
    CHECK(error_kind([&] { score_annotations(ref, ref, other, std::nullopt, 1.0, Aggregation::pooled); }) ==
          ErrorKind::alignment);
    const std::vector<FileSpan> ok{{"s1", "f1", 600.0}};
    CHECK(score_annotations(ref, ref, ok, std::nullopt, 1.0, Aggregation::pooled).test_duration_s == 600.0);
}

TEST_CASE("label tracks")
{
    LabelTrack t{"s1", "f1", 1.0, std::vector<Label>(600, 0)};
    for (int i = 100; i < 160; ++i) t.labels[i] = 1;
    const std::vector<Annotation> ref{ann("f1", 100, 160)};
    const std::vector<LabelTrack> tracks{t};
    const auto r = score_label_tracks(ref, tracks, Aggregation::fold_average);
    CHECK(r.f1_ep == 1.0);
    CHECK(r.f1_dur == 1.0);

    std::stringstream io;
    write_label_tracks(io, tracks);
    const auto back = read_label_tracks(io);
    REQUIRE(back.size() == 1);
    CHECK(back[0].labels == t.labels);
    CHECK(back[0].fs == 1.0);

    const std::vector<Annotation> outside{ann("f1", 500, 700)};
    CHECK(error_kind([&] { score_label_tracks(outside, tracks, Aggregation::pooled); }) == ErrorKind::alignment);

    std::istringstream bad(std::string(kLabelTrackHeader) + "\ns1,f1,1,01x0\n");
    CHECK(error_kind([&] { read_label_tracks(bad); }).has_value());
}

TEST_CASE("file span CSV")
{
    std::istringstream in(std::string(kFileSpanHeader) + "\ns1,f1,3600\ns1,f2,1800.5\n");
    const auto spans = read_file_spans(in);
    REQUIRE(spans.size() == 2);
    CHECK(spans[1].file == "f2");
    CHECK(spans[1].duration_s == 1800.5);
    std::istringstream wrong("a,b,c\n");
    CHECK(error_kind([&] { read_file_spans(wrong); }).has_value());
}
