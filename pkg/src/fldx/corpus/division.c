/* Division error: one rounding for the quotient plus the amplified
   operand errors. */
int main() {
  double x = read_double(1.0, 2.0);
  double y = read_double(3.0, 4.0);
  double z1 = x / y;
  double z2 = z1 / (x + y);
  /*@ accuracy_assert_derr(z1, -1e-15, 1e-15); */
  /*@ accuracy_assert_derr(z2, -1e-15, 1e-15); */
  /*@ dprint(z2); */
  return 0;
}
