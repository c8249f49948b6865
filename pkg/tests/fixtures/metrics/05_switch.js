function pick(tag) {
  switch (tag) {
    case 'a':
      return 1;
    case 'b':
      return 2;
    default:
      return 0;
  }
}
