#pragma once

// Shared test fixtures. The sample ticket mirrors the ITS record used across
// the golden tokenizer and ingest tests.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace fixtures {

inline const char* sample_ticket_json() {
    return R"({
  "key": "HTTPCLIENT-126",
  "summary": "Default charset",
  "description": "As defined in RFC2616 the default character set is ISO-8859-1 an not US-ASCII \nas defined in HttpMethodBase. See \"3.7.1 Canonicalization and Text Defaults\" at\nRFC 2616",
  "classified": "IMPROVEMENT",
  "type": "BUG",
  "label": "NBUG"
})";
}

inline std::string sample_corpus_json() {
    return std::string("[") + sample_ticket_json() + "]";
}

// Final sentence of the sample description.
inline const char* sample_last_sentence() {
    return "See \"3.7.1 Canonicalization and Text Defaults\" at\nRFC 2616";
}

// Scratch file helper; removes the file when destroyed.
class TempFile {
public:
    explicit TempFile(const std::string& name)
        : path_((std::filesystem::temp_directory_path() / name).string()) {}
    TempFile(const std::string& name, const std::string& contents) : TempFile(name) {
        std::ofstream out(path_, std::ios::binary);
        out << contents;
    }
    ~TempFile() { std::remove(path_.c_str()); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

}  // namespace fixtures
