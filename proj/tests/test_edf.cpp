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

#include "seizeval/edf.hpp"
#include "seizeval/rng.hpp"
#include "seizeval/synthgen.hpp"

#include <filesystem>
#include <fstream>

using namespace seizeval;

namespace {

EdfData two_channel(std::int64_t records = 3)
{
    EdfData d;
    d.header.patient_id = "P";
    d.header.recording_id = "R";
    d.header.n_records = records;
    d.header.signals = {default_signal_header("A", 4), default_signal_header("B", 2)};
    d.header.header_bytes = 768;
    Rng rng(1);
    for (const auto& s : d.header.signals) {
        std::vector<std::int16_t> v(s.samples_per_record * static_cast<std::size_t>(records));
        for (auto& x : v) x = static_cast<std::int16_t>(static_cast<int>(rng.below(65536)) - 32768);
        d.digital.push_back(v);
    }
    return d;
}

std::string message_of(const std::vector<std::uint8_t>& bytes)
{
    try {
        parse_edf(bytes);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

void put_field(std::vector<std::uint8_t>& bytes, std::size_t offset, std::size_t width, const std::string& text)
{
    for (std::size_t i = 0; i < width; ++i) bytes[offset + i] = i < text.size() ? static_cast<std::uint8_t>(text[i]) : ' ';
}

}  // namespace

TEST_CASE("write then parse is exact")
{
    const auto d = two_channel();
    const auto bytes = write_edf(d);
    CHECK(bytes.size() == 768 + 3 * (4 + 2) * 2);
    const auto back = parse_edf(bytes);
    CHECK(back.digital == d.digital);
    CHECK(back.header.signals[0].label == "A");
    CHECK(back.header.n_records == 3);
    CHECK(back.sampling_rate(0) == 4.0);
    CHECK(back.sampling_rate(1) == 2.0);
}

TEST_CASE("digital endpoints map onto physical endpoints")
{
    EdfSignalHeader s;
    s.physical_min = -200.5;
    s.physical_max = 812.25;
    s.digital_min = -2048;
    s.digital_max = 2047;
    CHECK(digital_to_physical(s, 2047) == 812.25);
    CHECK(digital_to_physical(s, -2048) == -200.5);
    CHECK(physical_to_digital(s, 812.25) == 2047);
    CHECK(physical_to_digital(s, 1e9) == 2047);
    CHECK(physical_to_digital(s, -1e9) == -2048);
    for (int d = -2048; d <= 2047; d += 7) CHECK(physical_to_digital(s, digital_to_physical(s, d)) == d);
}

TEST_CASE("truncation names expected and actual sizes")
{
    auto bytes = write_edf(two_channel());
    bytes.resize(bytes.size() - 5);
    const auto msg = message_of(bytes);
    CHECK(msg.find("parse error") != std::string::npos);
    CHECK(msg.find(std::to_string(bytes.size() + 5)) != std::string::npos);
    CHECK(msg.find(std::to_string(bytes.size())) != std::string::npos);
}

TEST_CASE("header arithmetic and record count checks")
{
    const auto good = write_edf(two_channel());

    auto bad_header = good;
    put_field(bad_header, 184, 8, "700");
    CHECK(error_kind([&] { parse_edf(bad_header); }) == ErrorKind::format);

    // Unknown record count (-1) is derived, unless the data is not whole records.
    auto unknown = good;
    put_field(unknown, 236, 8, "-1");
    CHECK(parse_edf(unknown).header.n_records == 3);
    unknown.push_back(0);
    CHECK(error_kind([&] { parse_edf(unknown); }) == ErrorKind::format);

    auto no_signals = good;
    put_field(no_signals, 252, 4, "0");
    CHECK(error_kind([&] { parse_edf(no_signals); }) == ErrorKind::format);

    auto garbage = good;
    put_field(garbage, 244, 8, "abc");
    CHECK(error_kind([&] { parse_edf(garbage); }) == ErrorKind::format);

    CHECK(error_kind([] { parse_edf(std::vector<std::uint8_t>(100, ' ')); }) == ErrorKind::parse);
}

TEST_CASE("random bytes never crash the parser")
{
    Rng rng(99);
    const auto good = write_edf(two_channel());
    for (int trial = 0; trial < 3000; ++trial) {
        auto bytes = good;
        for (int k = 0; k < 4; ++k) bytes[rng.below(bytes.size())] = static_cast<std::uint8_t>(rng.below(256));
        bytes.resize(rng.below(bytes.size() + 1));
        try {
            parse_edf(bytes);
        } catch (const Error&) {
        }
    }
    CHECK(true);
}

TEST_CASE("channel selection")
{
    const std::vector<std::string> available{"FP1-F7", "F7-T7", "T8-P8", "CZ-PZ", "T8-P8"};
    const std::vector<std::string> wanted{"CZ-PZ", "FP1-F7"};
    CHECK(select_channels(available, wanted) == std::vector<std::size_t>{3, 0});
    try {
        select_channels(available, std::vector<std::string>{"O1-O2"});
        FAIL("expected lookup error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::lookup);
        CHECK(std::string(e.what()).find("F7-T7") != std::string::npos);
    }
    CHECK(error_kind([&] { select_channels(available, std::vector<std::string>{"T8-P8"}); }) == ErrorKind::lookup);
    CHECK(select_channels(available, std::vector<std::string>{"T8-P8"}, true) == std::vector<std::size_t>{2});
}

TEST_CASE("duplicate labels pass only with identical samples")
{
    auto d = two_channel();
    d.header.signals[1] = default_signal_header("A", 4);
    d.digital[1] = d.digital[0];
    const std::vector<std::string> wanted{"A"};
    CHECK(select_channels(d, wanted).size() == 1);
    d.digital[1][0] ^= 1;
    CHECK(error_kind([&] { select_channels(d, wanted); }) == ErrorKind::lookup);
}

TEST_CASE("recording directory round trip")
{
    SynthConfig cfg;
    cfg.n_subjects = 2;
    cfg.hours_per_subject = 1.5;
    cfg.n_channels = 3;
    cfg.seizures_per_subject = {2, 0, 2};
    cfg.seizure_len_s = {30, 0, 30};
    const auto synth = generate(cfg);
    const auto dir = std::filesystem::temp_directory_path() / "seizeval_edf_dir_test";
    std::filesystem::remove_all(dir);
    write_recording_dir(dir, synth.recordings, 2);
    const auto back = load_recording_dir(dir, {{"FP1-F7", "T7-P7"}, 2});
    REQUIRE(back.recordings().size() == synth.recordings.recordings().size());
    for (std::size_t i = 0; i < back.recordings().size(); ++i) {
        const auto& a = synth.recordings.recordings()[i];
        const auto& b = back.recordings()[i];
        CHECK(a.meta.file_id == b.meta.file_id);
        CHECK(a.meta.seq_index == b.meta.seq_index);
        CHECK(a.seizures == b.seizures);
        REQUIRE(b.channels.size() == 2);
        CHECK(b.channels[0] == a.channels[0]);
        CHECK(b.channels[1] == a.channels[2]);
    }
    std::filesystem::remove_all(dir);
}
