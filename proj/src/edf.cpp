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

#include "seizeval/edf.hpp"

#include "seizeval/error.hpp"
#include "seizeval/parallel.hpp"
#include "seizeval/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace seizeval {

namespace {

constexpr const char* kModule = "edf-ingest";
constexpr std::size_t kFixedHeader = 256;
constexpr std::size_t kSignalHeader = 256;

class FieldReader {
public:
    FieldReader(std::span<const std::uint8_t> bytes, std::size_t offset) : bytes_(bytes), offset_(offset) {}

    std::string take(std::size_t width, const char* what)
    {
        if (offset_ + width > bytes_.size())
            fail(ErrorKind::parse, kModule,
                 std::string("truncated header at byte offset ") + std::to_string(bytes_.size()) + " while reading " +
                     what + ": expected " + std::to_string(offset_ + width) + " bytes, got " +
                     std::to_string(bytes_.size()));
        std::string s(reinterpret_cast<const char*>(bytes_.data() + offset_), width);
        for (char c : s)
            if (static_cast<unsigned char>(c) < 32 || static_cast<unsigned char>(c) > 126)
                fail(ErrorKind::parse, kModule,
                     std::string("non-ASCII byte in header field ") + what + " at offset " + std::to_string(offset_));
        offset_ += width;
        return trim(std::move(s));
    }

    template <typename T>
    T number(std::size_t width, const char* what)
    {
        const std::size_t at = offset_;
        const auto text = take(width, what);
        const auto v = parse_number<T>(text);
        if (!v || (std::is_floating_point_v<T> && !std::isfinite(static_cast<double>(*v))))
            fail(ErrorKind::format, kModule,
                 std::string("header field ") + what + " at offset " + std::to_string(at) + " is not a number: '" +
                     text + "'");
        return *v;
    }

    std::size_t offset() const noexcept { return offset_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t offset_;
};

void put_field(std::string& out, const std::string& value, std::size_t width, const char* what)
{
    if (value.size() > width)
        fail(ErrorKind::format, kModule,
             std::string("value '") + value + "' does not fit the " + std::to_string(width) + "-byte field " + what);
    out += value;
    out.append(width - value.size(), ' ');
}

// Shortest text of at most `width` characters; drops precision if needed.
std::string fit_number(double v, std::size_t width, const char* what)
{
    std::string s = format_double(v);
    if (s.size() <= width) return s;
    for (int prec = static_cast<int>(width); prec > 0; --prec) {
        std::ostringstream os;
        os.precision(prec);
        os << v;
        if (os.str().size() <= width) return os.str();
    }
    fail(ErrorKind::format, kModule, std::string("number does not fit field ") + what);
}

}  // namespace

std::size_t EdfHeader::record_bytes() const noexcept
{
    std::size_t n = 0;
    for (const auto& s : signals) n += 2 * s.samples_per_record;
    return n;
}

double EdfData::sampling_rate(std::size_t signal) const
{
    return static_cast<double>(header.signals.at(signal).samples_per_record) / header.record_duration_s;
}

std::vector<double> EdfData::physical(std::size_t signal) const
{
    const auto& sig = header.signals.at(signal);
    const auto& d = digital.at(signal);
    std::vector<double> out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) out[i] = digital_to_physical(sig, d[i]);
    return out;
}

double digital_to_physical(const EdfSignalHeader& sig, int digital)
{
    if (digital == sig.digital_max) return sig.physical_max;
    if (digital == sig.digital_min) return sig.physical_min;
    const double span = static_cast<double>(sig.digital_max) - sig.digital_min;
    return (sig.physical_max * (digital - sig.digital_min) + sig.physical_min * (sig.digital_max - digital)) / span;
}

std::int16_t physical_to_digital(const EdfSignalHeader& sig, double physical)
{
    const double span = static_cast<double>(sig.digital_max) - sig.digital_min;
    const double d = sig.digital_min + (physical - sig.physical_min) * span / (sig.physical_max - sig.physical_min);
    const double r = std::nearbyint(std::clamp(d, static_cast<double>(sig.digital_min),
                                               static_cast<double>(sig.digital_max)));
    return static_cast<std::int16_t>(r);
}

EdfData parse_edf(std::span<const std::uint8_t> bytes)
{
    EdfData out;
    auto& h = out.header;
    FieldReader r(bytes, 0);
    h.version = r.take(8, "version");
    h.patient_id = r.take(80, "patient id");
    h.recording_id = r.take(80, "recording id");
    h.start_date = r.take(8, "start date");
    h.start_time = r.take(8, "start time");
    h.header_bytes = r.number<std::size_t>(8, "header bytes");
    r.take(44, "reserved");
    h.n_records = r.number<std::int64_t>(8, "number of records");
    h.record_duration_s = r.number<double>(8, "record duration");
    const auto ns = r.number<std::size_t>(4, "number of signals");

    if (ns == 0) fail(ErrorKind::format, kModule, "file declares no signals");
    if (ns > 4096) fail(ErrorKind::format, kModule, "implausible signal count " + std::to_string(ns));
    if (h.header_bytes != kFixedHeader + kSignalHeader * ns)
        fail(ErrorKind::format, kModule,
             "header_bytes " + std::to_string(h.header_bytes) + " != 256 + 256 x " + std::to_string(ns) + " signals");
    if (!(h.record_duration_s > 0.0))
        fail(ErrorKind::format, kModule, "record duration must be positive");
    if (h.n_records < -1) fail(ErrorKind::format, kModule, "negative record count " + std::to_string(h.n_records));

    h.signals.resize(ns);
    for (auto& s : h.signals) s.label = r.take(16, "label");
    for (auto& s : h.signals) s.transducer = r.take(80, "transducer");
    for (auto& s : h.signals) s.physical_dimension = r.take(8, "physical dimension");
    for (auto& s : h.signals) s.physical_min = r.number<double>(8, "physical minimum");
    for (auto& s : h.signals) s.physical_max = r.number<double>(8, "physical maximum");
    for (auto& s : h.signals) s.digital_min = r.number<int>(8, "digital minimum");
    for (auto& s : h.signals) s.digital_max = r.number<int>(8, "digital maximum");
    for (auto& s : h.signals) s.prefiltering = r.take(80, "prefiltering");
    for (auto& s : h.signals) s.samples_per_record = r.number<std::size_t>(8, "samples per record");
    for (std::size_t i = 0; i < ns; ++i) r.take(32, "reserved");

    for (const auto& s : h.signals) {
        if (!(s.digital_min < s.digital_max) || s.digital_min < -32768 || s.digital_max > 32767)
            fail(ErrorKind::format, kModule, "signal '" + s.label + "': invalid digital range");
        if (s.physical_min == s.physical_max)
            fail(ErrorKind::format, kModule, "signal '" + s.label + "': physical range is empty");
        if (s.samples_per_record == 0 || s.samples_per_record > (1u << 24))
            fail(ErrorKind::format, kModule, "signal '" + s.label + "': invalid samples per record");
    }

    const std::size_t record = h.record_bytes();
    const std::size_t available = bytes.size() - h.header_bytes;
    if (h.n_records == -1) {
        if (available % record != 0)
            fail(ErrorKind::format, kModule,
                 "data size " + std::to_string(available) + " is not a whole number of " + std::to_string(record) +
                     "-byte records");
        h.n_records = static_cast<std::int64_t>(available / record);
    }
    const auto n_records = static_cast<std::size_t>(h.n_records);
    if (n_records > available / record)
        fail(ErrorKind::parse, kModule,
             "truncated data at byte offset " + std::to_string(bytes.size()) + ": expected " +
                 std::to_string(h.header_bytes + n_records * record) + " bytes, got " + std::to_string(bytes.size()));

    out.digital.resize(ns);
    for (std::size_t s = 0; s < ns; ++s) out.digital[s].resize(n_records * h.signals[s].samples_per_record);
    const std::uint8_t* p = bytes.data() + h.header_bytes;
    for (std::size_t rec = 0; rec < n_records; ++rec) {
        for (std::size_t s = 0; s < ns; ++s) {
            const std::size_t spr = h.signals[s].samples_per_record;
            auto* dst = out.digital[s].data() + rec * spr;
            for (std::size_t k = 0; k < spr; ++k, p += 2)
                dst[k] = static_cast<std::int16_t>(static_cast<std::uint16_t>(p[0] | (p[1] << 8)));
        }
    }
    return out;
}

EdfData read_edf_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, kModule, "cannot open '" + path.string() + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return parse_edf(bytes);
    } catch (const Error& e) {
        fail(e.kind(), kModule, path.filename().string() + ": " + std::string(e.what()).substr(e.module().size() + 2));
    }
}

std::vector<std::uint8_t> write_edf(const EdfData& data)
{
    const auto& h = data.header;
    const std::size_t ns = h.n_signals();
    if (ns == 0 || data.digital.size() != ns) fail(ErrorKind::format, kModule, "signal count mismatch");
    std::size_t n_records = 0;
    for (std::size_t s = 0; s < ns; ++s) {
        const auto spr = h.signals[s].samples_per_record;
        if (spr == 0 || data.digital[s].size() % spr != 0)
            fail(ErrorKind::format, kModule,
                 "signal '" + h.signals[s].label + "' is not a whole number of data records");
        const auto n = data.digital[s].size() / spr;
        if (s > 0 && n != n_records) fail(ErrorKind::format, kModule, "signals cover different record counts");
        n_records = n;
    }

    std::string head;
    head.reserve(kFixedHeader + kSignalHeader * ns);
    put_field(head, h.version, 8, "version");
    put_field(head, h.patient_id, 80, "patient id");
    put_field(head, h.recording_id, 80, "recording id");
    put_field(head, h.start_date, 8, "start date");
    put_field(head, h.start_time, 8, "start time");
    put_field(head, std::to_string(kFixedHeader + kSignalHeader * ns), 8, "header bytes");
    put_field(head, "", 44, "reserved");
    put_field(head, std::to_string(n_records), 8, "number of records");
    put_field(head, fit_number(h.record_duration_s, 8, "record duration"), 8, "record duration");
    put_field(head, std::to_string(ns), 4, "number of signals");
    for (const auto& s : h.signals) put_field(head, s.label, 16, "label");
    for (const auto& s : h.signals) put_field(head, s.transducer, 80, "transducer");
    for (const auto& s : h.signals) put_field(head, s.physical_dimension, 8, "physical dimension");
    for (const auto& s : h.signals) put_field(head, fit_number(s.physical_min, 8, "physical minimum"), 8, "physical minimum");
    for (const auto& s : h.signals) put_field(head, fit_number(s.physical_max, 8, "physical maximum"), 8, "physical maximum");
    for (const auto& s : h.signals) put_field(head, std::to_string(s.digital_min), 8, "digital minimum");
    for (const auto& s : h.signals) put_field(head, std::to_string(s.digital_max), 8, "digital maximum");
    for (const auto& s : h.signals) put_field(head, s.prefiltering, 80, "prefiltering");
    for (const auto& s : h.signals) put_field(head, std::to_string(s.samples_per_record), 8, "samples per record");
    for (std::size_t s = 0; s < ns; ++s) put_field(head, "", 32, "reserved");

    std::vector<std::uint8_t> out(head.begin(), head.end());
    out.reserve(out.size() + n_records * h.record_bytes());
    for (std::size_t rec = 0; rec < n_records; ++rec) {
        for (std::size_t s = 0; s < ns; ++s) {
            const auto spr = h.signals[s].samples_per_record;
            const auto* src = data.digital[s].data() + rec * spr;
            for (std::size_t k = 0; k < spr; ++k) {
                const auto u = static_cast<std::uint16_t>(src[k]);
                out.push_back(static_cast<std::uint8_t>(u & 0xff));
                out.push_back(static_cast<std::uint8_t>(u >> 8));
            }
        }
    }
    return out;
}

void write_edf_file(const std::filesystem::path& path, const EdfData& data)
{
    const auto bytes = write_edf(data);
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::io, kModule, "cannot write '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::io, kModule, "write failed for '" + path.string() + "'");
}

std::vector<std::size_t> select_channels(std::span<const std::string> available, std::span<const std::string> wanted,
                                         bool allow_duplicates)
{
    std::vector<std::size_t> idx;
    idx.reserve(wanted.size());
    for (const auto& w : wanted) {
        const auto key = trim(w);
        std::vector<std::size_t> hits;
        for (std::size_t i = 0; i < available.size(); ++i)
            if (trim(available[i]) == key) hits.push_back(i);
        if (hits.empty()) {
            std::string list;
            for (const auto& a : available) list += (list.empty() ? "" : ", ") + trim(a);
            fail(ErrorKind::lookup, kModule, "channel '" + key + "' not found; available: " + list);
        }
        if (hits.size() > 1 && !allow_duplicates)
            fail(ErrorKind::lookup, kModule,
                 "channel '" + key + "' appears " + std::to_string(hits.size()) +
                     " times; rename the duplicates to disambiguate");
        idx.push_back(hits.front());
    }
    return idx;
}

std::vector<std::vector<double>> select_channels(const EdfData& data, std::span<const std::string> wanted)
{
    std::vector<std::string> labels;
    for (const auto& s : data.header.signals) labels.push_back(s.label);
    const auto idx = select_channels(labels, wanted, true);
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto key = trim(wanted[k]);
        for (std::size_t i = idx[k] + 1; i < labels.size(); ++i)
            if (labels[i] == key && data.digital[i] != data.digital[idx[k]])
                fail(ErrorKind::lookup, kModule,
                     "channel '" + key + "' appears more than once with different samples; disambiguate the labels");
    }
    std::vector<std::vector<double>> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(data.physical(i));
    return out;
}

const std::vector<std::string>& chbmit_common_channels()
{
    static const std::vector<std::string> channels = {
        "FP1-F7", "F7-T7", "T7-P7", "P7-O1", "FP1-F3", "F3-C3", "C3-P3", "P3-O1", "FP2-F4",
        "F4-C4",  "C4-P4", "P4-O2", "FP2-F8", "F8-T8", "T8-P8", "P8-O2", "FZ-CZ", "CZ-PZ",
    };
    return channels;
}

EdfSignalHeader default_signal_header(const std::string& label, std::size_t samples_per_record)
{
    EdfSignalHeader s;
    s.label = label;
    s.physical_dimension = "uV";
    s.physical_min = -3276.8;
    s.physical_max = 3276.7;
    s.digital_min = -32768;
    s.digital_max = 32767;
    s.samples_per_record = samples_per_record;
    return s;
}

EdfData recording_to_edf(const Recording& rec)
{
    const double fs = rec.meta.fs;
    if (fs != std::floor(fs) || fs < 1.0)
        fail(ErrorKind::format, kModule, "recording '" + rec.meta.file_id + "': fs must be an integer for EDF export");
    const auto spr = static_cast<std::size_t>(fs);
    if (rec.n_samples() % spr != 0)
        fail(ErrorKind::format, kModule, "recording '" + rec.meta.file_id + "': length is not whole seconds");
    EdfData d;
    d.header.patient_id = rec.meta.subject_id;
    d.header.recording_id = rec.meta.file_id;
    d.header.record_duration_s = 1.0;
    d.header.n_records = static_cast<std::int64_t>(rec.n_samples() / spr);
    for (std::size_t c = 0; c < rec.channels.size(); ++c) {
        const auto sig = default_signal_header(rec.channel_labels[c], spr);
        std::vector<std::int16_t> dig(rec.channels[c].size());
        for (std::size_t i = 0; i < dig.size(); ++i) dig[i] = physical_to_digital(sig, rec.channels[c][i]);
        d.header.signals.push_back(sig);
        d.digital.push_back(std::move(dig));
    }
    d.header.header_bytes = kFixedHeader + kSignalHeader * d.header.signals.size();
    return d;
}

namespace {

struct FileEntry {
    std::string subject;
    std::string file;
    std::size_t seq = 0;
};

std::vector<FileEntry> read_recordings_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, kModule, "cannot open '" + path.string() + "'");
    std::vector<FileEntry> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (line_no == 1 && trim(line) == kRecordingsHeader) continue;
        const auto f = split_csv_line(line);
        const auto seq = f.size() == 3 ? parse_number<std::size_t>(trim(f[2])) : std::nullopt;
        if (!seq)
            fail(ErrorKind::parse, kModule,
                 "recordings.csv line " + std::to_string(line_no) + ": expected subject,file,seq_index");
        out.push_back({trim(f[0]), trim(f[1]), *seq});
    }
    return out;
}

}  // namespace

RecordingSet load_recording_dir(const std::filesystem::path& dir, const IngestOptions& opts)
{
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) fail(ErrorKind::io, kModule, "'" + dir.string() + "' is not a directory");

    std::vector<FileEntry> entries;
    if (fs::exists(dir / "recordings.csv")) {
        entries = read_recordings_csv(dir / "recordings.csv");
    } else {
        std::vector<std::string> stems;
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_regular_file() && e.path().extension() == ".edf") stems.push_back(e.path().stem().string());
        std::sort(stems.begin(), stems.end());
        std::map<std::string, std::size_t> next_seq;
        for (const auto& s : stems) {
            const auto subject = s.substr(0, s.find('_'));
            entries.push_back({subject, s, next_seq[subject]++});
        }
    }
    if (entries.empty()) fail(ErrorKind::lookup, kModule, "no EDF recordings in '" + dir.string() + "'");

    std::map<std::string, std::vector<Event>> seizures;
    if (fs::exists(dir / "annotations.csv")) {
        std::set<std::string> known;
        for (const auto& e : entries) known.insert(e.file);
        for (auto& a : read_annotations_file((dir / "annotations.csv").string())) {
            if (!known.count(a.file))
                fail(ErrorKind::lookup, kModule, "annotation refers to unknown file '" + a.file + "'");
            if (a.event.label() == kSeizure) seizures[a.file].push_back(a.event);
        }
    }

    std::vector<Recording> recs(entries.size());
    parallel_for(entries.size(), opts.jobs, [&](std::size_t i) {
        const auto& e = entries[i];
        const auto data = read_edf_file(dir / (e.file + ".edf"));
        std::vector<std::string> labels;
        for (const auto& s : data.header.signals) labels.push_back(s.label);
        const std::vector<std::string> wanted = opts.channels.empty() ? labels : opts.channels;
        const auto idx = select_channels(labels, wanted, true);
        const auto physical = select_channels(data, wanted);

        Recording& r = recs[i];
        const double fs = data.sampling_rate(idx.front());
        for (auto k : idx)
            if (data.sampling_rate(k) != fs)
                fail(ErrorKind::format, kModule, e.file + ": selected channels have different sampling rates");
        r.meta.subject_id = e.subject;
        r.meta.file_id = e.file;
        r.meta.fs = fs;
        r.meta.n_channels = idx.size();
        r.meta.seq_index = e.seq;
        r.channel_labels.clear();
        for (const auto& w : wanted) r.channel_labels.push_back(trim(w));
        for (const auto& ch : physical) r.channels.emplace_back(ch.begin(), ch.end());
        r.meta.duration_s = static_cast<double>(r.n_samples()) / fs;
        auto it = seizures.find(e.file);
        if (it != seizures.end()) {
            r.seizures = it->second;
            std::sort(r.seizures.begin(), r.seizures.end(),
                      [](const Event& a, const Event& b) { return a.start() < b.start(); });
        }
    });
    return RecordingSet(std::move(recs));
}

void write_recording_dir(const std::filesystem::path& dir, const RecordingSet& set, int jobs)
{
    std::filesystem::create_directories(dir);
    const auto recs = set.recordings();
    parallel_for(recs.size(), jobs,
                 [&](std::size_t i) { write_edf_file(dir / (recs[i].meta.file_id + ".edf"), recording_to_edf(recs[i])); });

    std::vector<Annotation> rows;
    std::ofstream meta(dir / "recordings.csv");
    meta << kRecordingsHeader << '\n';
    for (const auto& subject : set.subjects()) {
        for (auto i : set.indices_of(subject)) {
            const auto& r = recs[i];
            meta << r.meta.subject_id << ',' << r.meta.file_id << ',' << r.meta.seq_index << '\n';
            for (const auto& e : r.seizures) rows.push_back({r.meta.subject_id, r.meta.file_id, e});
        }
    }
    std::ofstream ann(dir / "annotations.csv");
    write_annotations(ann, rows);
    if (!meta || !ann) fail(ErrorKind::io, kModule, "failed writing metadata in '" + dir.string() + "'");
}

}  // namespace seizeval
