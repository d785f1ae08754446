// Copyright 2026 The kieval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Converts public benchmark files into the question JSONL read by kieval.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "kieval/converters.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Convert benchmark files to kieval question JSONL"};
  std::string format, input, output, subject, source;
  app.add_option("--format", format, "Input format")
      ->required()
      ->check(CLI::IsMember({"arc", "hellaswag", "mmlu", "ceval"}));
  app.add_option("--input", input, "Input file")->required()->check(CLI::ExistingFile);
  app.add_option("--output", output, "Output JSONL file")->required();
  app.add_option("--subject", subject, "Subject (mmlu, ceval; defaults to the file stem)");
  app.add_option("--source", source, "Source tag stored with each question");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    std::ifstream in(input, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (subject.empty()) subject = std::filesystem::path(input).stem().string();
    if (source.empty()) source = format;

    std::vector<kieval::BenchmarkQuestion> questions;
    if (format == "arc") questions = kieval::convert_arc(ss.str(), source);
    if (format == "hellaswag") questions = kieval::convert_hellaswag(ss.str(), source);
    if (format == "mmlu") questions = kieval::convert_mmlu(ss.str(), subject, source);
    if (format == "ceval") questions = kieval::convert_ceval(ss.str(), subject, source);

    std::ofstream out(output, std::ios::binary | std::ios::trunc);
    if (!out) throw kieval::Error("cannot write " + output);
    for (const auto& q : questions) out << kieval::encode(q) << '\n';
    std::cerr << questions.size() << " questions written to " << output << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
