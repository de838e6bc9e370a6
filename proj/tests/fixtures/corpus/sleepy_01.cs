using System.Threading;
using Xunit;

namespace Fixtures.Sleepy
{
    public class ThreadSleepTests
    {
        [Fact]
        public void WaitsForBackgroundWork()
        {
            var worker = new BackgroundWorker();
            worker.Start();
            Thread.Sleep(1000);
            Assert.True(worker.IsDone);
        }
    }
}
