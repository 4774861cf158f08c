#include "strongdamp/analysis.hpp"

int main(int argc, char** argv) {
    return strongdamp::analysis::run_cli(argc, argv);
}
