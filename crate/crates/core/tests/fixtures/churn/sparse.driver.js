var r = new Range(1, 5);
console.log(r.contains(3), r.contains(9), clamp(9, 1, 5), mean([1, 2, 3]), max([4, 9, 2]), variance([1, 2, 3, 4]));
