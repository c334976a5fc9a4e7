#include "rubricbench/log.hpp"

#include <iostream>
#include <mutex>

namespace rubricbench {

namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

WarningSink& current_sink() {
  static WarningSink sink;
  return sink;
}

}  // namespace

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard lock(sink_mutex());
  std::swap(current_sink(), sink);
  return sink;
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex());
  if (current_sink()) {
    current_sink()(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

}  // namespace rubricbench
