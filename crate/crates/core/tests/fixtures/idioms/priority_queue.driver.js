var pq = new PriorityQueue();
pq.enqueue('low', 5);
pq.enqueue('high', 1);
pq.enqueue('mid', 3);
console.log(pq.extract(), pq.extract(), pq.extract());
