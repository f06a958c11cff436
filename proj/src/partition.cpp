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

#include "seizeval/partition.hpp"

#include "seizeval/error.hpp"
#include "seizeval/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

namespace seizeval {

namespace {

constexpr const char* kModule = "partition";

std::size_t to_sample(double seconds, double fs)
{
    return static_cast<std::size_t>(std::max(0LL, std::llround(seconds * fs)));
}

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string file_name(const std::string& subject, const std::string& tag, std::size_t index)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03zu", index);
    return subject + "_" + tag + "_" + buf;
}

DataFile make_file(const SubjectLayout& s, std::string id, std::size_t seq, std::vector<TimelineSpan> payload,
                   std::vector<Event> events)
{
    DataFile f;
    f.meta.subject_id = s.subject_id;
    f.meta.file_id = std::move(id);
    f.meta.fs = s.fs;
    f.meta.n_channels = s.n_channels;
    f.meta.seq_index = seq;
    f.payload = std::move(payload);
    f.events = std::move(events);
    f.meta.duration_s = static_cast<double>(f.n_samples()) / s.fs;
    return f;
}

// Seizure pieces falling inside [span.begin, span.end), shifted to file time.
std::vector<Event> clip_seizures(const SubjectLayout& s, TimelineSpan span)
{
    std::vector<Event> out;
    const double lo = static_cast<double>(span.begin) / s.fs;
    const double hi = static_cast<double>(span.end) / s.fs;
    for (const auto& e : s.seizures) {
        const double a = std::max(e.start(), lo);
        const double b = std::min(e.end(), hi);
        if (a < b) out.emplace_back(a - lo, b - lo, e.label());
    }
    return out;
}

// Free sample intervals for contiguous block draws.
class FreeIntervals {
public:
    FreeIntervals(std::vector<TimelineSpan> spans) : spans_(std::move(spans)) {}

    std::optional<TimelineSpan> draw(std::size_t length, Rng& rng)
    {
        std::uint64_t placements = 0;
        for (const auto& s : spans_)
            if (s.size() >= length) placements += s.size() - length + 1;
        if (placements == 0) return std::nullopt;
        std::uint64_t pick = rng.below(placements);
        for (std::size_t i = 0; i < spans_.size(); ++i) {
            const auto s = spans_[i];
            if (s.size() < length) continue;
            const std::uint64_t here = s.size() - length + 1;
            if (pick >= here) {
                pick -= here;
                continue;
            }
            const TimelineSpan block{s.begin + pick, s.begin + pick + length};
            spans_.erase(spans_.begin() + static_cast<std::ptrdiff_t>(i));
            if (block.end < s.end) spans_.insert(spans_.begin() + static_cast<std::ptrdiff_t>(i), {block.end, s.end});
            if (s.begin < block.begin) spans_.insert(spans_.begin() + static_cast<std::ptrdiff_t>(i), {s.begin, block.begin});
            return block;
        }
        return std::nullopt;
    }

private:
    std::vector<TimelineSpan> spans_;
};

std::vector<TimelineSpan> seizure_free_spans(const SubjectLayout& s, double guard_s)
{
    std::vector<TimelineSpan> free;
    std::size_t cursor = 0;
    for (const auto& e : s.seizures) {
        const double lo_s = e.start() - guard_s;
        const std::size_t lo = lo_s <= 0.0 ? 0 : static_cast<std::size_t>(std::floor(lo_s * s.fs));
        const std::size_t hi = std::min(s.n_samples, static_cast<std::size_t>(std::ceil((e.end() + guard_s) * s.fs)));
        if (lo > cursor) free.push_back({cursor, std::min(lo, s.n_samples)});
        cursor = std::max(cursor, hi);
    }
    if (cursor < s.n_samples) free.push_back({cursor, s.n_samples});
    return free;
}

std::map<std::string, std::vector<const DataFile*>> group_by_subject(std::span<const DataFile> files)
{
    std::map<std::string, std::vector<const DataFile*>> groups;
    for (const auto& f : files) groups[f.meta.subject_id].push_back(&f);
    for (auto& [subject, list] : groups)
        std::stable_sort(list.begin(), list.end(),
                         [](const DataFile* a, const DataFile* b) { return a->meta.seq_index < b->meta.seq_index; });
    return groups;
}

}  // namespace

std::size_t DataFile::n_samples() const noexcept
{
    std::size_t n = 0;
    for (const auto& p : payload) n += p.size();
    return n;
}

std::string_view to_string(CvScheme scheme) noexcept { return scheme == CvScheme::l1o ? "l1o" : "tscv"; }

std::string_view to_string(Scope scope) noexcept
{
    return scope == Scope::personalized ? "personalized" : "generalized";
}

CvScheme parse_cv_scheme(std::string_view text)
{
    if (text == "l1o" || text == "L1O") return CvScheme::l1o;
    if (text == "tscv" || text == "TSCV") return CvScheme::tscv;
    fail(ErrorKind::parse, kModule, "unknown cross-validation scheme '" + std::string(text) + "'");
}

Scope parse_scope(std::string_view text)
{
    if (text == "personalized") return Scope::personalized;
    if (text == "generalized") return Scope::generalized;
    fail(ErrorKind::parse, kModule, "unknown scope '" + std::string(text) + "'");
}

std::vector<DataFile> build_fact_subset(std::span<const SubjectLayout> subjects, int factor_k, std::uint64_t rng_seed,
                                        double guard_s)
{
    if (factor_k < 1) fail(ErrorKind::domain, kModule, "factor must be a positive integer");
    std::vector<DataFile> files;
    const std::string tag = "fact" + std::to_string(factor_k);
    for (const auto& s : subjects) {
        if (s.seizures.empty())
            fail(ErrorKind::precondition, kModule, "subject '" + s.subject_id + "' has no seizures");
        Rng rng = Rng::derive(rng_seed, fnv1a(s.subject_id));
        FreeIntervals free(seizure_free_spans(s, guard_s));
        for (std::size_t i = 0; i < s.seizures.size(); ++i) {
            const auto& e = s.seizures[i];
            const TimelineSpan seizure{to_sample(e.start(), s.fs), to_sample(e.end(), s.fs)};
            const std::size_t context = static_cast<std::size_t>(factor_k) * seizure.size();
            const std::size_t left_len = context / 2;
            const std::size_t right_len = context - left_len;
            std::vector<TimelineSpan> payload;
            for (std::size_t len : {left_len, right_len}) {
                if (len == 0) continue;
                auto block = free.draw(len, rng);
                if (!block)
                    fail(ErrorKind::capacity, kModule,
                         "subject '" + s.subject_id + "': not enough seizure-free data for factor " +
                             std::to_string(factor_k) + " around seizure " + std::to_string(i));
                payload.push_back(*block);
            }
            payload.insert(payload.begin() + (left_len > 0 ? 1 : 0), seizure);
            const double start = static_cast<double>(left_len) / s.fs;
            const double end = static_cast<double>(left_len + seizure.size()) / s.fs;
            files.push_back(make_file(s, file_name(s.subject_id, tag, i), i, std::move(payload), {Event(start, end)}));
        }
    }
    return files;
}

std::vector<DataFile> build_seizure_to_seizure(std::span<const SubjectLayout> subjects)
{
    std::vector<DataFile> files;
    for (const auto& s : subjects) {
        if (s.seizures.empty()) fail(ErrorKind::domain, kModule, "subject '" + s.subject_id + "' has no seizures");
        std::size_t begin = 0;
        for (std::size_t i = 0; i < s.seizures.size(); ++i) {
            const bool last = i + 1 == s.seizures.size();
            const std::size_t end = last ? s.n_samples : std::min(s.n_samples, to_sample(s.seizures[i].end(), s.fs));
            const TimelineSpan span{begin, end};
            files.push_back(make_file(s, file_name(s.subject_id, "stos", i), i, {span}, clip_seizures(s, span)));
            begin = end;
        }
    }
    return files;
}

std::vector<DataFile> build_fixed_windows(std::span<const SubjectLayout> subjects, const FixedWindowConfig& cfg)
{
    if (!(cfg.window_h > 0.0)) fail(ErrorKind::domain, kModule, "window_h must be > 0");
    if (!(cfg.first_fold_min_h >= 0.0)) fail(ErrorKind::domain, kModule, "first_fold_min_h must be >= 0");
    std::vector<DataFile> files;
    const std::string tag = "win" + format_double(cfg.window_h) + "h";
    for (const auto& s : subjects) {
        const std::size_t window = to_sample(cfg.window_h * 3600.0, s.fs);
        const std::size_t minimum = to_sample(cfg.first_fold_min_h * 3600.0, s.fs);
        if (window == 0) fail(ErrorKind::domain, kModule, "window shorter than one sample");
        if (s.n_samples < minimum)
            fail(ErrorKind::capacity, kModule,
                 "subject '" + s.subject_id + "': recording (" + format_double(s.duration_s() / 3600.0) +
                     " h) shorter than the first-fold minimum of " + format_double(cfg.first_fold_min_h) + " h");
        if (s.seizures.size() < cfg.first_fold_min_seizures)
            fail(ErrorKind::capacity, kModule,
                 "subject '" + s.subject_id + "': fewer seizures than the first-fold minimum");

        std::size_t needed = minimum;
        if (cfg.first_fold_min_seizures > 0)
            needed = std::max(needed, to_sample(s.seizures[cfg.first_fold_min_seizures - 1].end(), s.fs));
        const std::size_t extra_windows = needed > minimum ? (needed - minimum + window - 1) / window : 0;
        std::size_t end = std::min(s.n_samples, minimum + extra_windows * window);

        std::size_t index = 0;
        std::size_t begin = 0;
        while (begin < s.n_samples) {
            const TimelineSpan span{begin, end};
            files.push_back(make_file(s, file_name(s.subject_id, tag, index), index, {span}, clip_seizures(s, span)));
            ++index;
            begin = end;
            end = std::min(s.n_samples, begin + window);
        }
    }
    return files;
}

FoldPlan make_folds_l1o(std::span<const DataFile> files)
{
    FoldPlan plan{CvScheme::l1o, Scope::personalized, {}};
    for (const auto& [subject, list] : group_by_subject(files)) {
        for (const auto* f : list)
            if (f->events.size() != 1)
                fail(ErrorKind::precondition, kModule,
                     "leave-one-out needs exactly one seizure per file; '" + f->meta.file_id + "' has " +
                         std::to_string(f->events.size()));
        if (list.size() < 2)
            fail(ErrorKind::domain, kModule, "subject '" + subject + "' needs at least 2 files for leave-one-out");
        for (std::size_t i = 0; i < list.size(); ++i) {
            Fold fold{subject, {}, {list[i]->meta.file_id}};
            for (std::size_t j = 0; j < list.size(); ++j)
                if (j != i) fold.train.push_back(list[j]->meta.file_id);
            plan.folds.push_back(std::move(fold));
        }
    }
    return plan;
}

FoldPlan make_folds_tscv(std::span<const DataFile> files)
{
    FoldPlan plan{CvScheme::tscv, Scope::personalized, {}};
    for (const auto& [subject, list] : group_by_subject(files)) {
        if (list.size() < 2)
            fail(ErrorKind::domain, kModule,
                 "subject '" + subject + "' needs at least 2 files for time-series cross-validation");
        for (std::size_t i = 1; i < list.size(); ++i) {
            Fold fold{subject, {}, {list[i]->meta.file_id}};
            for (std::size_t j = 0; j < i; ++j) fold.train.push_back(list[j]->meta.file_id);
            plan.folds.push_back(std::move(fold));
        }
    }
    return plan;
}

FoldPlan make_scope_generalized(std::span<const DataFile> files)
{
    const auto groups = group_by_subject(files);
    if (groups.size() < 2) fail(ErrorKind::domain, kModule, "generalized scope needs at least 2 subjects");
    FoldPlan plan{CvScheme::l1o, Scope::generalized, {}};
    for (const auto& [subject, list] : groups) {
        Fold fold{subject, {}, {}};
        for (const auto& [other, other_list] : groups)
            for (const auto* f : other_list) (other == subject ? fold.test : fold.train).push_back(f->meta.file_id);
        plan.folds.push_back(std::move(fold));
    }
    return plan;
}

FoldPlan make_scope_generalized(std::span<const DataFile> files, const std::string& test_subject)
{
    FoldPlan all = make_scope_generalized(files);
    for (auto& fold : all.folds)
        if (fold.subject_id == test_subject) return FoldPlan{all.scheme, all.scope, {std::move(fold)}};
    fail(ErrorKind::lookup, kModule, "unknown test subject '" + test_subject + "'");
}

void validate_plan(const FoldPlan& plan, std::span<const DataFile> files)
{
    std::unordered_map<std::string, const DataFile*> by_id;
    for (const auto& f : files) by_id[f.meta.file_id] = &f;
    auto lookup = [&](const std::string& id) {
        auto it = by_id.find(id);
        if (it == by_id.end()) fail(ErrorKind::lookup, kModule, "fold references unknown file '" + id + "'");
        return it->second;
    };

    for (std::size_t k = 0; k < plan.folds.size(); ++k) {
        const auto& fold = plan.folds[k];
        const std::string where = "fold " + std::to_string(k) + ": ";
        if (fold.test.empty()) fail(ErrorKind::validation, kModule, where + "empty test set");
        const std::set<std::string> test(fold.test.begin(), fold.test.end());
        for (const auto& id : fold.train)
            if (test.count(id)) fail(ErrorKind::validation, kModule, where + "file '" + id + "' in train and test");

        std::set<std::string> test_subjects;
        for (const auto& id : fold.test) test_subjects.insert(lookup(id)->meta.subject_id);

        for (const auto& tr_id : fold.train) {
            const auto* tr = lookup(tr_id);
            if (plan.scope == Scope::generalized && test_subjects.count(tr->meta.subject_id))
                fail(ErrorKind::validation, kModule,
                     where + "training file '" + tr_id + "' shares a subject with the test set");
            if (plan.scheme == CvScheme::tscv)
                for (const auto& te_id : fold.test) {
                    const auto* te = lookup(te_id);
                    if (te->meta.subject_id == tr->meta.subject_id && !(tr->meta.seq_index < te->meta.seq_index))
                        fail(ErrorKind::validation, kModule,
                             where + "training file '" + tr_id + "' does not precede test file '" + te_id + "'");
                }
        }
    }
}

nlohmann::ordered_json to_json(const FoldPlan& plan)
{
    nlohmann::ordered_json j;
    j["scheme"] = to_string(plan.scheme);
    j["scope"] = to_string(plan.scope);
    auto folds = nlohmann::ordered_json::array();
    for (const auto& f : plan.folds)
        folds.push_back({{"subject", f.subject_id}, {"train", f.train}, {"test", f.test}});
    j["folds"] = std::move(folds);
    return j;
}

FoldPlan plan_from_json(const nlohmann::json& j)
{
    try {
        FoldPlan plan;
        plan.scheme = parse_cv_scheme(j.at("scheme").get<std::string>());
        plan.scope = parse_scope(j.at("scope").get<std::string>());
        for (const auto& f : j.at("folds"))
            plan.folds.push_back(Fold{f.at("subject").get<std::string>(), f.at("train").get<std::vector<std::string>>(),
                                      f.at("test").get<std::vector<std::string>>()});
        return plan;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::parse, kModule, std::string("malformed fold plan: ") + e.what());
    }
}

nlohmann::ordered_json to_json(const DataFile& file)
{
    nlohmann::ordered_json j;
    j["subject"] = file.meta.subject_id;
    j["file"] = file.meta.file_id;
    j["seq_index"] = file.meta.seq_index;
    j["duration_s"] = file.meta.duration_s;
    j["fs"] = file.meta.fs;
    auto events = nlohmann::ordered_json::array();
    for (const auto& e : file.events) events.push_back({e.start(), e.end()});
    j["events"] = std::move(events);
    auto payload = nlohmann::ordered_json::array();
    for (const auto& p : file.payload) payload.push_back({p.begin, p.end});
    j["payload_samples"] = std::move(payload);
    return j;
}

}  // namespace seizeval
