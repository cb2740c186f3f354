#include <sliderule/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return sliderule::run_cli(argc, argv, std::cout, std::cerr); }
