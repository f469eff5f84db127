#include "ptdilate/cli.hpp"

int main(int argc, char** argv) { return ptdilate::cli::run(argc, argv); }
