/* Absorption: adding a small term to a large one loses the small
   term's low-order bits; the error is about half an ulp of the large
   operand. */
int main() {
  double x = read_double(100000000.0, 100000000.0);
  double y = read_double(0.0, 1.0);
  double z = x + y;
  /*@ accuracy_assert_derr(z, -1e-7, 1e-7); */
  /*@ dprint(z); */
  return 0;
}
