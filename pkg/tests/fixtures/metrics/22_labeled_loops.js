function scan(grid) {
  outer: for (let i = 0; i < 3; i++) {
    for (let j = 0; j < 3; j++) {
      if (grid[i][j] === 0) {
        continue outer;
      }
    }
  }
  return true;
}
