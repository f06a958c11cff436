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

#pragma once

#include "seizeval/recording.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace seizeval {

struct EdfSignalHeader {
    std::string label;
    std::string transducer;
    std::string physical_dimension;
    double physical_min = 0.0;
    double physical_max = 0.0;
    int digital_min = -32768;
    int digital_max = 32767;
    std::string prefiltering;
    std::size_t samples_per_record = 0;
};

struct EdfHeader {
    std::string version = "0";
    std::string patient_id;
    std::string recording_id;
    std::string start_date = "01.01.00";  ///< dd.mm.yy
    std::string start_time = "00.00.00";  ///< hh.mm.ss
    std::size_t header_bytes = 0;
    std::int64_t n_records = 0;
    double record_duration_s = 1.0;
    std::vector<EdfSignalHeader> signals;

    std::size_t n_signals() const noexcept { return signals.size(); }
    /// Bytes per data record (2 per sample).
    std::size_t record_bytes() const noexcept;
};

/// A parsed file: header plus raw digital samples per signal.
struct EdfData {
    EdfHeader header;
    std::vector<std::vector<std::int16_t>> digital;

    double sampling_rate(std::size_t signal) const;
    std::vector<double> physical(std::size_t signal) const;
};

/// Linear map from [digital_min, digital_max] onto [physical_min, physical_max].
/// The endpoints map exactly.
double digital_to_physical(const EdfSignalHeader& sig, int digital);

/// Nearest digital value, clamped to the digital range.
std::int16_t physical_to_digital(const EdfSignalHeader& sig, double physical);

/// Decodes an EDF byte stream. A declared record count of -1 is derived from
/// the data size. Bytes after the last declared record are ignored.
EdfData parse_edf(std::span<const std::uint8_t> bytes);

EdfData read_edf_file(const std::filesystem::path& path);

/// Serializes with fields padded to the fixed widths; header_bytes and
/// n_records are recomputed from the data.
std::vector<std::uint8_t> write_edf(const EdfData& data);

void write_edf_file(const std::filesystem::path& path, const EdfData& data);

/// Positions of `wanted` labels (compared after trimming) in `available`.
/// A missing label is a lookup error listing what is available. A wanted label
/// present more than once is an error unless allow_duplicates, in which case
/// the first occurrence is used.
std::vector<std::size_t> select_channels(std::span<const std::string> available, std::span<const std::string> wanted,
                                         bool allow_duplicates = false);

/// Reordered physical signals for `wanted`. Duplicated labels are accepted only
/// when their samples are identical (as in some CHB-MIT files).
std::vector<std::vector<double>> select_channels(const EdfData& data, std::span<const std::string> wanted);

/// The 18 bipolar channels shared by all CHB-MIT subjects.
const std::vector<std::string>& chbmit_common_channels();

/// Digital grid used for synthetic and re-exported signals: 0.1 unit
/// resolution over [-3276.8, 3276.7].
EdfSignalHeader default_signal_header(const std::string& label, std::size_t samples_per_record);

/// One recording as EDF with 1 s records. Its sample count must be a whole
/// number of records and fs an integer.
EdfData recording_to_edf(const Recording& rec);

struct IngestOptions {
    std::vector<std::string> channels;  ///< empty: keep every channel of the file
    int jobs = 1;
};

/// Loads a directory of <file_id>.edf files plus annotations.csv. The optional
/// recordings.csv (subject,file,seq_index) fixes subjects and order; without
/// it the subject is the file name up to the first '_' and files are ordered
/// by name.
RecordingSet load_recording_dir(const std::filesystem::path& dir, const IngestOptions& opts = {});

/// Writes one EDF per recording plus annotations.csv and recordings.csv.
void write_recording_dir(const std::filesystem::path& dir, const RecordingSet& set, int jobs = 1);

inline constexpr const char* kRecordingsHeader = "subject,file,seq_index";

}  // namespace seizeval
