#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace attachnet {

using WarningSink = std::function<void(std::string_view)>;

// Installs a process-wide sink for non-fatal warnings (ridge fallbacks, dropped
// arcs, degenerate ellipses). Returns the previous sink. The default writes to
// stderr.
WarningSink set_warning_sink(WarningSink sink);

void warn(std::string_view message);

// Collects warnings for the lifetime of the object; restores the previous sink
// on destruction.
class ScopedWarningCapture {
public:
    ScopedWarningCapture();
    ~ScopedWarningCapture();
    ScopedWarningCapture(const ScopedWarningCapture&) = delete;
    ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

    const std::vector<std::string>& messages() const { return messages_; }

private:
    std::vector<std::string> messages_;
    WarningSink previous_;
};

}  // namespace attachnet
