#include "cli.hpp"

int main(int argc, char** argv) { return enriched::cli::run(argc, argv); }
